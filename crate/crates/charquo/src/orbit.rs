//! Breadth-first enumeration of a B4-orbit in PSL2(F_p)^4 modulo the
//! centralizer action, with deterministic indexing and permutation extraction.

use std::collections::HashMap;
use std::hash::Hash;
use std::io::{self, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::braidquandle::{self, apply_letter, BraidWord, Letter, Psl2, Quad, Sl2};
use crate::charvar::{self, CanonicalKey, Params};
use crate::ffield::{FieldError, PglElem, PrimeField, ProjMat2};
use crate::permgrp::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("gamma mismatch: the point does not satisfy ab^-1cd^-1 = gamma")]
    GammaMismatch,
    #[error("delta mismatch: the point does not satisfy a^-1bc^-1d = delta")]
    DeltaMismatch,
    #[error("sign mismatch: no lift has gamma and delta with a common sign")]
    SignMismatch,
    #[error("point budget of {max_points} exceeded after {reached} points")]
    Budget { max_points: usize, reached: usize },
    #[error("image of point {0} is missing from the orbit index")]
    MissingImage(usize),
    #[error("epsilon does not preserve orbit (point {0})")]
    EpsilonLeavesOrbit(usize),
    #[error("no conjugator for epsilon twist: {0}")]
    NoConjugator(FieldError),
}

#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_points: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_points: 4_000_000,
        }
    }
}

/// An orbit with points indexed by ascending canonical key.
#[derive(Debug, Clone)]
pub struct OrbitIndex {
    pub field: PrimeField,
    pub points: Vec<Quad<ProjMat2>>,
    pub keys: Vec<CanonicalKey>,
}

impl OrbitIndex {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, key: &CanonicalKey) -> Option<usize> {
        self.keys.binary_search(key).ok()
    }

    pub fn index_of_point(&self, q: &Quad<ProjMat2>) -> Option<usize> {
        self.index_of(&charvar::fast_key(&self.field, q))
    }
}

/// Whether some SL2 lift of `q` has `ab^{-1}cd^{-1} = ±γ` and `a^{-1}bc^{-1}d = ±δ`
/// with a common sign. Changing the sign of one lift flips both products.
pub fn lifts_with_common_sign(q: &Quad<ProjMat2>, params: &Params) -> bool {
    let f = &params.field;
    let g = Sl2(*f);
    let lift = q.map(|m| m.0);
    let gl = braidquandle::gamma(&g, &lift);
    let dl = braidquandle::delta(&g, &lift);
    (gl == params.gamma && dl == params.delta)
        || (gl == f.mat_neg(&params.gamma) && dl == f.mat_neg(&params.delta))
}

pub fn check_point(p: &Quad<ProjMat2>, params: &Params) -> Result<(), OrbitError> {
    let f = &params.field;
    let g = Psl2(*f);
    if braidquandle::gamma(&g, p) != f.proj(params.gamma) {
        return Err(OrbitError::GammaMismatch);
    }
    if braidquandle::delta(&g, p) != f.proj(params.delta) {
        return Err(OrbitError::DeltaMismatch);
    }
    if !lifts_with_common_sign(p, params) {
        return Err(OrbitError::SignMismatch);
    }
    Ok(())
}

/// Generic BFS under the six letters, deduplicating by `key`.
/// Returns `(key, representative)` pairs in discovery order.
pub fn bfs<K, F>(
    start: &Quad<ProjMat2>,
    field: &PrimeField,
    budget: Budget,
    key: F,
) -> Result<Vec<(K, Quad<ProjMat2>)>, OrbitError>
where
    K: Hash + Eq + Clone + Send + Sync,
    F: Fn(&Quad<ProjMat2>) -> K + Sync,
{
    let g = Psl2(*field);
    let mut seen: HashMap<K, u32> = HashMap::new();
    let mut found: Vec<(K, Quad<ProjMat2>)> = Vec::new();
    let k0 = key(start);
    seen.insert(k0.clone(), 0);
    found.push((k0, *start));
    let mut lo = 0;
    while lo < found.len() {
        let hi = found.len();
        let images: Vec<(K, Quad<ProjMat2>)> = found[lo..hi]
            .par_iter()
            .flat_map_iter(|(_, q)| {
                Letter::ALL.iter().map(|&l| {
                    let img = apply_letter(&g, l, q);
                    (key(&img), img)
                })
            })
            .collect();
        for (k, img) in images {
            if !seen.contains_key(&k) {
                if found.len() >= budget.max_points {
                    return Err(OrbitError::Budget {
                        max_points: budget.max_points,
                        reached: found.len(),
                    });
                }
                seen.insert(k.clone(), found.len() as u32);
                found.push((k, img));
            }
        }
        lo = hi;
    }
    Ok(found)
}

pub fn enumerate(p: &Quad<ProjMat2>, params: &Params, budget: Budget) -> Result<OrbitIndex, OrbitError> {
    check_point(p, params)?;
    let f = params.field;
    let mut found = bfs(p, &f, budget, |q| charvar::fast_key(&f, q))?;
    found.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let (keys, points) = found.into_iter().unzip();
    Ok(OrbitIndex {
        field: f,
        points,
        keys,
    })
}

/// Orbit size when points are identified by the exact centralizer-coset key.
pub fn enumerate_exact(p: &Quad<ProjMat2>, params: &Params, budget: Budget) -> Result<Vec<Quad<ProjMat2>>, OrbitError> {
    check_point(p, params)?;
    let found = bfs(p, &params.field, budget, |q| charvar::key_exact(q, params))?;
    let mut keys: Vec<Quad<ProjMat2>> = found.into_iter().map(|(k, _)| k).collect();
    keys.sort_unstable();
    Ok(keys)
}

/// Outcome of comparing the fast trace key with the exact key on one orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualKeyReport {
    pub fast_size: usize,
    pub exact_size: usize,
    /// Distinct fast keys over the exact classes.
    pub fast_keys_on_exact: usize,
    /// Distinct exact keys over the fast representatives.
    pub exact_keys_on_fast: usize,
}

impl DualKeyReport {
    pub fn agree(&self) -> bool {
        self.fast_size == self.exact_size
            && self.fast_keys_on_exact == self.exact_size
            && self.exact_keys_on_fast == self.fast_size
    }
}

pub fn dual_key_check(p: &Quad<ProjMat2>, params: &Params, budget: Budget) -> Result<DualKeyReport, OrbitError> {
    let fast = enumerate(p, params, budget)?;
    let exact = enumerate_exact(p, params, budget)?;
    let f = params.field;
    let mut fk: Vec<CanonicalKey> = exact.par_iter().map(|q| charvar::fast_key(&f, q)).collect();
    fk.par_sort_unstable();
    fk.dedup();
    let mut ek: Vec<Quad<ProjMat2>> = fast.points.par_iter().map(|q| charvar::key_exact(q, params)).collect();
    ek.par_sort_unstable();
    ek.dedup();
    let in_exact = ek.iter().filter(|k| exact.binary_search(k).is_ok()).count();
    Ok(DualKeyReport {
        fast_size: fast.len(),
        exact_size: exact.len(),
        fast_keys_on_exact: fk.len(),
        exact_keys_on_fast: in_exact,
    })
}

/// Index-level action of one letter.
pub fn letter_perm(l: Letter, o: &OrbitIndex) -> Result<Permutation, OrbitError> {
    let g = Psl2(o.field);
    let images: Vec<Result<u32, OrbitError>> = o
        .points
        .par_iter()
        .enumerate()
        .map(|(i, q)| {
            o.index_of_point(&apply_letter(&g, l, q))
                .map(|j| j as u32)
                .ok_or(OrbitError::MissingImage(i))
        })
        .collect();
    images
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map(Permutation)
}

/// All six letter permutations, in `Letter::ALL` order.
pub fn letter_perms(o: &OrbitIndex) -> Result<Vec<Permutation>, OrbitError> {
    Letter::ALL.iter().map(|&l| letter_perm(l, o)).collect()
}

/// Permutation of a word, composed from letter permutations left to right.
pub fn perm_from_letters(w: &BraidWord, letters: &[Permutation], n: usize) -> Permutation {
    w.0.iter().fold(Permutation::identity(n), |acc, l| {
        let idx = Letter::ALL.iter().position(|x| x == l).unwrap();
        acc.then(&letters[idx])
    })
}

/// Index-level image of every point under `w`, applied point by point.
pub fn perm_of(w: &BraidWord, o: &OrbitIndex) -> Result<Permutation, OrbitError> {
    let g = Psl2(o.field);
    let images: Vec<Result<u32, OrbitError>> = o
        .points
        .par_iter()
        .enumerate()
        .map(|(i, q)| {
            o.index_of_point(&braidquandle::apply_word(&g, w, q))
                .map(|j| j as u32)
                .ok_or(OrbitError::MissingImage(i))
        })
        .collect();
    images
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map(Permutation)
}

/// The twist pair `(g, h)` with `g γ^{-1} g^{-1} = γ`, `h^{-1} δ^{-1} h = δ` and equal classes.
pub fn epsilon_twist(params: &Params) -> Result<(PglElem, PglElem), OrbitError> {
    let f = &params.field;
    let gp = f.proj(params.gamma);
    let dp = f.proj(params.delta);
    let mut g = f.conjugator(&f.proj_inv(&gp), &gp).map_err(OrbitError::NoConjugator)?;
    let h = f.conjugator(&dp, &f.proj_inv(&dp)).map_err(OrbitError::NoConjugator)?;
    if g.square_det != h.square_det {
        let t = params
            .cent_gamma
            .iter()
            .find(|t| !t.square_det)
            .expect("a torus contains both determinant classes");
        g = f.pgl_mul(&g, t);
    }
    Ok((g, h))
}

pub fn epsilon_point(f: &PrimeField, g: &PglElem, h: &PglElem, q: &Quad<ProjMat2>) -> Quad<ProjMat2> {
    braidquandle::epsilon(q).map(|m| f.twist(g, &m.0, h))
}

pub fn epsilon_perm(o: &OrbitIndex, params: &Params) -> Result<Permutation, OrbitError> {
    let (g, h) = epsilon_twist(params)?;
    let f = o.field;
    let images: Vec<Result<u32, OrbitError>> = o
        .points
        .par_iter()
        .enumerate()
        .map(|(i, q)| {
            o.index_of_point(&epsilon_point(&f, &g, &h, q))
                .map(|j| j as u32)
                .ok_or(OrbitError::EpsilonLeavesOrbit(i))
        })
        .collect();
    images
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map(Permutation)
}

pub fn f2_words() -> (BraidWord, BraidWord) {
    let x: BraidWord = "s1 s3^-1".parse().unwrap();
    let y: BraidWord = "s2 s1 s3^-1 s2^-1".parse().unwrap();
    (x, y)
}

pub fn f2_perms(o: &OrbitIndex) -> Result<(Permutation, Permutation), OrbitError> {
    let letters = letter_perms(o)?;
    let (x, y) = f2_words();
    Ok((
        perm_from_letters(&x, &letters, o.len()),
        perm_from_letters(&y, &letters, o.len()),
    ))
}

/// The `σi`-matrix of a point: `AB^{-1}`, `BC^{-1}` or `CD^{-1}`, which `σi` fixes.
pub fn sigma_matrix(f: &PrimeField, q: &Quad<ProjMat2>, i: u8) -> ProjMat2 {
    let (u, v) = match i {
        1 => (&q.a, &q.b),
        2 => (&q.b, &q.c),
        3 => (&q.c, &q.d),
        _ => panic!("braid letter index {i} outside 1..=3"),
    };
    f.proj_mul(u, &f.proj_inv(v))
}

pub const DUMP_MAGIC: &[u8; 4] = b"CHQO";
pub const DUMP_VERSION: u32 = 1;
const DUMP_HEADER: usize = 4 + 4 + 8 + 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DumpError {
    #[error("bad magic")]
    Magic,
    #[error("unsupported version {0}")]
    Version(u32),
    #[error("truncated or oversized body: header says {expected} keys, found {found} bytes")]
    Length { expected: u64, found: usize },
    #[error("modulus {0} is invalid")]
    Modulus(u64),
    #[error("key {0} has a coordinate outside [0, p)")]
    Range(usize),
    #[error("keys are not strictly ascending at {0}")]
    Order(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dump {
    pub p: u64,
    pub keys: Vec<CanonicalKey>,
}

pub fn write_dump<W: Write>(o: &OrbitIndex, mut w: W) -> io::Result<()> {
    w.write_all(DUMP_MAGIC)?;
    w.write_all(&DUMP_VERSION.to_le_bytes())?;
    w.write_all(&o.field.modulus().to_le_bytes())?;
    w.write_all(&(o.len() as u64).to_le_bytes())?;
    let mut buf = Vec::with_capacity(o.len() * 28);
    for k in &o.keys {
        for c in k.0 {
            buf.extend_from_slice(&c.to_le_bytes());
        }
    }
    w.write_all(&buf)
}

pub fn encode_dump(o: &OrbitIndex) -> Vec<u8> {
    let mut out = Vec::with_capacity(DUMP_HEADER + o.len() * 28);
    write_dump(o, &mut out).expect("writing to a Vec cannot fail");
    out
}

pub fn decode_dump(bytes: &[u8]) -> Result<Dump, DumpError> {
    if bytes.len() < DUMP_HEADER || &bytes[..4] != DUMP_MAGIC {
        return Err(DumpError::Magic);
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
    let u64_at = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != DUMP_VERSION {
        return Err(DumpError::Version(version));
    }
    let p = u64_at(8);
    if PrimeField::new(p).is_err() {
        return Err(DumpError::Modulus(p));
    }
    let n = u64_at(16);
    let body = &bytes[DUMP_HEADER..];
    if n.checked_mul(28) != Some(body.len() as u64) {
        return Err(DumpError::Length {
            expected: n,
            found: body.len(),
        });
    }
    let mut keys = Vec::with_capacity(n as usize);
    for (i, chunk) in body.chunks_exact(28).enumerate() {
        let mut k = [0u32; 7];
        for (j, c) in k.iter_mut().enumerate() {
            *c = u32::from_le_bytes(chunk[4 * j..4 * j + 4].try_into().unwrap());
            if *c as u64 >= p {
                return Err(DumpError::Range(i));
            }
        }
        let key = CanonicalKey(k);
        if keys.last().is_some_and(|prev| *prev >= key) {
            return Err(DumpError::Order(i));
        }
        keys.push(key);
    }
    Ok(Dump { p, keys })
}
