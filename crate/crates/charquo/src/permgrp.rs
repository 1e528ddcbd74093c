//! Permutation groups: parity, transitivity, stabilizer chains, block systems and
//! Monte-Carlo recognition of alternating and symmetric groups.
//!
//! Permutations are image arrays. `p.then(&q)` applies `p` first.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(pub Vec<u32>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("image array is not a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("degree mismatch: {0} vs {1}")]
    Degree(usize, usize),
    #[error("malformed permutation text: {0}")]
    Syntax(String),
    #[error("degree {n} exceeds the stabilizer-chain bound {bound}")]
    TooLarge { n: usize, bound: usize },
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(PermError::NotBijection(n));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    /// Builds a permutation of degree `n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for cyc in cycles {
            for (i, &x) in cyc.iter().enumerate() {
                let y = cyc[(i + 1) % cyc.len()];
                if x as usize >= n || y as usize >= n || touched[x as usize] {
                    return Err(PermError::NotBijection(n));
                }
                touched[x as usize] = true;
                images[x as usize] = y;
            }
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut out = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u32;
        }
        Permutation(out)
    }

    pub fn pow(&self, k: u64) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Disjoint cycles including fixed points, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i as u32);
                i = self.0[i] as usize;
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                len += 1;
                i = self.0[i] as usize;
            }
            out.push(len);
        }
        out
    }

    /// Length of the cycle through each point.
    pub fn cycle_length_of_points(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.degree()];
        for cyc in self.cycles() {
            for &x in &cyc {
                out[x as usize] = cyc.len() as u32;
            }
        }
        out
    }

    pub fn order(&self) -> BigUint {
        self.cycle_lengths()
            .into_iter()
            .fold(BigUint::from(1u32), |acc, l| {
                let l = BigUint::from(l);
                let g = gcd(&acc, &l);
                acc * l / g
            })
    }

    pub fn to_cycle_string(&self) -> String {
        let cycles: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let items: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", items.join(" "))
            })
            .collect();
        if cycles.is_empty() {
            "()".to_string()
        } else {
            cycles.concat()
        }
    }
}

fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut a, mut b) = (a.clone(), b.clone());
    while b != BigUint::from(0u32) {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Parses either a JSON image array `[1, 2, 0]` or cycle notation `n:(0 1 2)(3 4)`.
impl FromStr for Permutation {
    type Err = PermError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.starts_with('[') {
            let images: Vec<u32> =
                serde_json::from_str(s).map_err(|e| PermError::Syntax(e.to_string()))?;
            return Permutation::from_images(images);
        }
        let (deg, body) = s
            .split_once(':')
            .ok_or_else(|| PermError::Syntax("expected `n:` prefix".into()))?;
        let n: usize = deg
            .trim()
            .parse()
            .map_err(|_| PermError::Syntax(format!("bad degree {deg:?}")))?;
        if n > 1 << 24 {
            return Err(PermError::Syntax(format!("degree {n} too large")));
        }
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut rest = body.trim();
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::Syntax(format!("expected '(' at {rest:?}")))?;
            let close = inner
                .find(')')
                .ok_or_else(|| PermError::Syntax("unclosed cycle".into()))?;
            let cyc = inner[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| PermError::Syntax(format!("bad point {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if !cyc.is_empty() {
                cycles.push(cyc);
            }
            rest = inner[close + 1..].trim_start();
        }
        let refs: Vec<&[u32]> = cycles.iter().map(|c| c.as_slice()).collect();
        Permutation::from_cycles(n, &refs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.degree(), self.to_cycle_string())
    }
}

/// +1 or -1, via `n - #cycles`.
pub fn sign(p: &Permutation) -> i8 {
    if (p.degree() - p.cycle_lengths().len()) % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn is_transitive(gens: &[Permutation], n: usize) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.image(x);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

pub const DEFAULT_ORACLE_BOUND: usize = 5000;

#[derive(Debug, Clone)]
struct Level {
    point: usize,
    gens: Vec<Permutation>,
    /// `transversal[β]` maps the base point to `β`.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(point: usize, n: usize) -> Level {
        let mut transversal = vec![None; n];
        transversal[point] = Some(Permutation::identity(n));
        Level {
            point,
            gens: Vec::new(),
            transversal,
            orbit: vec![point],
        }
    }

    fn rebuild_orbit(&mut self) {
        let n = self.transversal.len();
        self.transversal = vec![None; n];
        self.transversal[self.point] = Some(Permutation::identity(n));
        self.orbit = vec![self.point];
        let mut i = 0;
        while i < self.orbit.len() {
            let b = self.orbit[i];
            let ub = self.transversal[b].clone().unwrap();
            for g in &self.gens {
                let c = g.image(b);
                if self.transversal[c].is_none() {
                    self.transversal[c] = Some(ub.then(g));
                    self.orbit.push(c);
                }
            }
            i += 1;
        }
    }
}

/// A base and strong generating set with explicit transversals.
#[derive(Debug, Clone)]
pub struct Bsgs {
    n: usize,
    levels: Vec<Level>,
}

impl Bsgs {
    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Sifts `g`; returns the residue and the level where sifting stopped.
    fn strip(&self, g: &Permutation) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, l) in self.levels.iter().enumerate() {
            let b = h.image(l.point);
            match &l.transversal[b] {
                Some(u) => h = h.then(&u.inverse()),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.n && {
            let (h, j) = self.strip(g);
            j == self.levels.len() && h.is_identity()
        }
    }
}

pub fn schreier_sims(gens: &[Permutation], n: usize) -> Result<Bsgs, PermError> {
    schreier_sims_bounded(gens, n, DEFAULT_ORACLE_BOUND)
}

pub fn schreier_sims_bounded(gens: &[Permutation], n: usize, bound: usize) -> Result<Bsgs, PermError> {
    if n > bound {
        return Err(PermError::TooLarge { n, bound });
    }
    for g in gens {
        if g.degree() != n {
            return Err(PermError::Degree(g.degree(), n));
        }
    }
    let mut bsgs = Bsgs {
        n,
        levels: Vec::new(),
    };
    let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    if gens.is_empty() {
        return Ok(bsgs);
    }
    let first = (0..n).find(|&x| gens.iter().any(|g| g.image(x) != x)).unwrap();
    bsgs.levels.push(Level::new(first, n));
    for g in &gens {
        add_strong_generator(&mut bsgs, 0, g.clone());
    }
    let mut i = bsgs.levels.len();
    while i > 0 {
        let lvl = i - 1;
        let mut restart = None;
        'search: for bi in 0..bsgs.levels[lvl].orbit.len() {
            let b = bsgs.levels[lvl].orbit[bi];
            for si in 0..bsgs.levels[lvl].gens.len() {
                let s = &bsgs.levels[lvl].gens[si];
                let ub = bsgs.levels[lvl].transversal[b].as_ref().unwrap();
                let c = s.image(b);
                let uc = bsgs.levels[lvl].transversal[c].as_ref().unwrap();
                let schreier = ub.then(s).then(&uc.inverse());
                if schreier.is_identity() {
                    continue;
                }
                let (h, j) = strip_from(&bsgs, lvl + 1, &schreier);
                if j < bsgs.levels.len() || !h.is_identity() {
                    if j == bsgs.levels.len() {
                        let pt = (0..n).find(|&x| h.image(x) != x).unwrap();
                        bsgs.levels.push(Level::new(pt, n));
                    }
                    for l in lvl + 1..=j.min(bsgs.levels.len() - 1) {
                        bsgs.levels[l].gens.push(h.clone());
                        bsgs.levels[l].rebuild_orbit();
                    }
                    restart = Some(j.min(bsgs.levels.len() - 1) + 1);
                    break 'search;
                }
            }
        }
        match restart {
            Some(r) => i = r,
            None => i -= 1,
        }
    }
    Ok(bsgs)
}

fn add_strong_generator(bsgs: &mut Bsgs, level: usize, g: Permutation) {
    bsgs.levels[level].gens.push(g);
    bsgs.levels[level].rebuild_orbit();
}

fn strip_from(bsgs: &Bsgs, start: usize, g: &Permutation) -> (Permutation, usize) {
    let mut h = g.clone();
    for i in start..bsgs.levels.len() {
        let l = &bsgs.levels[i];
        let b = h.image(l.point);
        match &l.transversal[b] {
            Some(u) => h = h.then(&u.inverse()),
            None => return (h, i),
        }
    }
    (h, bsgs.levels.len())
}

/// The finest block system in which `alpha` and `beta` share a block.
/// `None` means that block is the whole domain.
pub fn minimal_block(gens: &[Permutation], alpha: usize, beta: usize, n: usize) -> Option<Vec<Vec<u32>>> {
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: usize) -> usize {
        while parent[x] as usize != x {
            let up = parent[parent[x] as usize];
            parent[x] = up;
            x = up as usize;
        }
        x
    }
    let merge = |parent: &mut Vec<u32>, a: usize, b: usize| -> bool {
        let ra = find(parent, a);
        let rb = find(parent, b);
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo as u32;
        true
    };
    let mut queue = VecDeque::new();
    let mut classes = n;
    if merge(&mut parent, alpha, beta) {
        queue.push_back((alpha, beta));
        classes -= 1;
    }
    while let Some((x, y)) = queue.pop_front() {
        for g in gens {
            let (a, b) = (g.image(x), g.image(y));
            if merge(&mut parent, a, b) {
                queue.push_back((a, b));
                classes -= 1;
            }
        }
    }
    if classes <= 1 {
        return None;
    }
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(x as u32);
    }
    Some(blocks)
}

/// A generator or its inverse, by index into the generator list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenLetter {
    pub gen: usize,
    pub inverse: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GiantCertificate {
    pub word: Vec<GenLetter>,
    pub q: usize,
    pub n: usize,
    pub trial: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GiantOutcome {
    Certificate(GiantCertificate),
    Inconclusive(String),
}

pub fn eval_word(gens: &[Permutation], word: &[GenLetter], n: usize) -> Permutation {
    let inverses: Vec<Permutation> = gens.iter().map(|g| g.inverse()).collect();
    let mut acc = Permutation::identity(n);
    for l in word {
        let g = if l.inverse { &inverses[l.gen] } else { &gens[l.gen] };
        acc = acc.then(g);
    }
    acc
}

/// Primes `q` with `n/2 < q < n - 2`.
pub fn prime_window(n: usize) -> Vec<usize> {
    (n / 2 + 1..n.saturating_sub(2)).filter(|&q| arith::is_prime(q as u64)).collect()
}

impl GiantCertificate {
    pub fn word_string(&self, names: &[&str]) -> String {
        self.word
            .iter()
            .map(|l| {
                if l.inverse {
                    format!("{}^-1", names[l.gen])
                } else {
                    names[l.gen].to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Recomputes the word and checks the window, primality and the q-cycle.
    pub fn revalidate(&self, gens: &[Permutation]) -> bool {
        let n = self.n;
        if !(2 * self.q > n && self.q + 2 < n && arith::is_prime(self.q as u64)) {
            return false;
        }
        if gens.iter().any(|g| g.degree() != n) || self.word.iter().any(|l| l.gen >= gens.len()) {
            return false;
        }
        is_transitive(gens, n) && eval_word(gens, &self.word, n).cycle_lengths().contains(&self.q)
    }
}

const WORD_BASE_LEN: usize = 40;
const WORD_JITTER_MEAN: f64 = 20.0;

fn random_word(ngens: usize, seed: u64, trial: u64) -> Vec<GenLetter> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let stop = 1.0 / (WORD_JITTER_MEAN + 1.0);
    let mut len = WORD_BASE_LEN;
    while !rng.gen_bool(stop) {
        len += 1;
    }
    (0..len)
        .map(|_| GenLetter {
            gen: rng.gen_range(0..ngens),
            inverse: rng.gen_bool(0.5),
        })
        .collect()
}

/// Searches seeded random words for a cycle of prime length `q` with `n/2 < q < n-2`.
///
/// A transitive group containing such an element is primitive and contains a
/// `q`-cycle, hence contains `A_n` by Jordan's theorem.
pub fn giant_certificate(gens: &[Permutation], n: usize, seed: u64, budget: u64) -> GiantOutcome {
    if prime_window(n).is_empty() {
        return GiantOutcome::Inconclusive("n too small, use schreier_sims".into());
    }
    if gens.is_empty() || !is_transitive(gens, n) {
        return GiantOutcome::Inconclusive("generators are not transitive".into());
    }
    let inverses: Vec<Permutation> = gens.iter().map(|g| g.inverse()).collect();
    let lo = n / 2;
    let hi = n - 2;
    let batch = 32u64;
    let mut start = 0u64;
    while start < budget {
        let end = (start + batch).min(budget);
        let hit = (start..end)
            .into_par_iter()
            .filter_map(|trial| {
                let word = random_word(gens.len(), seed, trial);
                let mut acc = Permutation::identity(n);
                for l in &word {
                    let g = if l.inverse { &inverses[l.gen] } else { &gens[l.gen] };
                    acc = acc.then(g);
                }
                acc.cycle_lengths()
                    .into_iter()
                    .find(|&len| len > lo && 2 * len > n && len < hi && arith::is_prime(len as u64))
                    .map(|q| (trial, word, q))
            })
            .min_by_key(|(trial, _, _)| *trial);
        if let Some((trial, word, q)) = hit {
            return GiantOutcome::Certificate(GiantCertificate { word, q, n, trial });
        }
        start = end;
    }
    GiantOutcome::Inconclusive(format!("no certificate within {budget} words"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GiantClass {
    Alternating,
    Symmetric,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GiantMethod {
    Certificate,
    StabilizerChain,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub class: GiantClass,
    pub method: GiantMethod,
    pub certificate: Option<GiantCertificate>,
    pub note: String,
}

#[derive(Debug, Clone, Copy)]
pub struct GiantConfig {
    pub seed: u64,
    pub budget: u64,
    pub oracle_bound: usize,
}

impl Default for GiantConfig {
    fn default() -> Self {
        GiantConfig {
            seed: 0,
            budget: 2000,
            oracle_bound: 12,
        }
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

/// Certificate first; stabilizer chain for degrees up to `oracle_bound`.
pub fn classify_giant(gens: &[Permutation], n: usize, cfg: &GiantConfig) -> Classification {
    let all_even = gens.iter().all(|g| sign(g) == 1);
    let parity_class = if all_even {
        GiantClass::Alternating
    } else {
        GiantClass::Symmetric
    };
    if !is_transitive(gens, n) {
        return Classification {
            class: GiantClass::Inconclusive,
            method: GiantMethod::None,
            certificate: None,
            note: "not transitive".into(),
        };
    }
    let note = match giant_certificate(gens, n, cfg.seed, cfg.budget) {
        GiantOutcome::Certificate(c) => {
            return Classification {
                class: parity_class,
                method: GiantMethod::Certificate,
                note: format!("transitive with a {}-cycle power, {} < {} < {}", c.q, n as f64 / 2.0, c.q, n - 2),
                certificate: Some(c),
            }
        }
        GiantOutcome::Inconclusive(reason) => reason,
    };
    if n <= cfg.oracle_bound {
        if let Ok(bsgs) = schreier_sims_bounded(gens, n, cfg.oracle_bound) {
            let order = bsgs.order();
            let full = factorial(n);
            let class = if order == full && n >= 2 && !all_even {
                GiantClass::Symmetric
            } else if n >= 2 && order * BigUint::from(2u32) == full || n < 2 {
                GiantClass::Alternating
            } else {
                GiantClass::Inconclusive
            };
            return Classification {
                class,
                method: GiantMethod::StabilizerChain,
                certificate: None,
                note: format!("stabilizer chain order, {note}"),
            };
        }
    }
    Classification {
        class: GiantClass::Inconclusive,
        method: GiantMethod::None,
        certificate: None,
        note,
    }
}
