//! The equivariant quandle `a ◁ b = a b^{-1} a` and the B4 action on quadruples.
//!
//! Braid words act left to right: the leftmost letter is applied first.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ffield::{Mat2, PrimeField, ProjMat2};

pub trait Group {
    type Elem: Clone + PartialEq + fmt::Debug;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

/// PSL2(F_p) with canonical-sign representatives.
#[derive(Debug, Clone, Copy)]
pub struct Psl2(pub PrimeField);

/// SL2(F_p).
#[derive(Debug, Clone, Copy)]
pub struct Sl2(pub PrimeField);

/// The symmetric group on `n` points; `mul(a, b)` is the composition `a ∘ b`.
#[derive(Debug, Clone, Copy)]
pub struct Symmetric(pub usize);

impl Group for Psl2 {
    type Elem = ProjMat2;
    fn identity(&self) -> ProjMat2 {
        ProjMat2::IDENTITY
    }
    #[inline]
    fn mul(&self, a: &ProjMat2, b: &ProjMat2) -> ProjMat2 {
        self.0.proj_mul(a, b)
    }
    #[inline]
    fn inv(&self, a: &ProjMat2) -> ProjMat2 {
        self.0.proj_inv(a)
    }
}

impl Group for Sl2 {
    type Elem = Mat2;
    fn identity(&self) -> Mat2 {
        Mat2::IDENTITY
    }
    fn mul(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        self.0.mat_mul(a, b)
    }
    fn inv(&self, a: &Mat2) -> Mat2 {
        self.0.adj(a)
    }
}

impl Group for Symmetric {
    type Elem = Vec<u32>;
    fn identity(&self) -> Vec<u32> {
        (0..self.0 as u32).collect()
    }
    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        b.iter().map(|&i| a[i as usize]).collect()
    }
    fn inv(&self, a: &Vec<u32>) -> Vec<u32> {
        let mut out = vec![0; a.len()];
        for (i, &x) in a.iter().enumerate() {
            out[x as usize] = i as u32;
        }
        out
    }
}

pub fn triangle<G: Group>(g: &G, a: &G::Elem, b: &G::Elem) -> G::Elem {
    g.mul(&g.mul(a, &g.inv(b)), a)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quad<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T> Quad<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Quad { a, b, c, d }
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Quad<U> {
        Quad::new(f(&self.a), f(&self.b), f(&self.c), f(&self.d))
    }

    pub fn to_array(self) -> [T; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

impl<T: Copy> Copy for Quad<T> {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    /// Generator index in `1..=3`.
    pub gen: u8,
    pub inverse: bool,
}

impl Letter {
    pub const ALL: [Letter; 6] = [
        Letter::sigma(1),
        Letter::sigma(2),
        Letter::sigma(3),
        Letter::sigma_inv(1),
        Letter::sigma_inv(2),
        Letter::sigma_inv(3),
    ];

    pub const fn sigma(i: u8) -> Letter {
        Letter {
            gen: i,
            inverse: false,
        }
    }

    pub const fn sigma_inv(i: u8) -> Letter {
        Letter {
            gen: i,
            inverse: true,
        }
    }

    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "s{}^-1", self.gen)
        } else {
            write!(f, "s{}", self.gen)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseWordError {
    #[error("unrecognized braid letter {0:?}")]
    BadLetter(String),
}

impl FromStr for Letter {
    type Err = ParseWordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseWordError::BadLetter(s.to_string());
        let rest = s.strip_prefix('s').ok_or_else(bad)?;
        let (digit, inverse) = match rest.strip_suffix("^-1") {
            Some(d) => (d, true),
            None => (rest, false),
        };
        match digit {
            "1" | "2" | "3" => Ok(Letter {
                gen: digit.as_bytes()[0] - b'0',
                inverse,
            }),
            _ => Err(bad()),
        }
    }
}

/// A word in `σ1^{±1}, σ2^{±1}, σ3^{±1}`, written `s1 s2^-1 s3`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BraidWord(pub Vec<Letter>);

impl BraidWord {
    pub fn empty() -> Self {
        BraidWord(Vec::new())
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn then(&self, other: &BraidWord) -> BraidWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        BraidWord(v)
    }

    pub fn pow(&self, k: usize) -> BraidWord {
        BraidWord(self.0.repeat(k))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for BraidWord {
    type Err = ParseWordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(|c: char| c.is_whitespace() || c == ',' || c == '.')
            .filter(|t| !t.is_empty())
            .map(Letter::from_str)
            .collect::<Result<Vec<_>, _>>()
            .map(BraidWord)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

pub fn apply_letter<G: Group>(g: &G, letter: Letter, q: &Quad<G::Elem>) -> Quad<G::Elem> {
    let Quad { a, b, c, d } = q.clone();
    match (letter.gen, letter.inverse) {
        (1, false) => Quad::new(triangle(g, &a, &b), a, c, d),
        (2, false) => Quad::new(a, triangle(g, &b, &c), b, d),
        (3, false) => Quad::new(a, b, triangle(g, &c, &d), c),
        (1, true) => Quad::new(b.clone(), triangle(g, &b, &a), c, d),
        (2, true) => Quad::new(a, c.clone(), triangle(g, &c, &b), d),
        (3, true) => Quad::new(a, b, d.clone(), triangle(g, &d, &c)),
        _ => panic!("braid letter index {} outside 1..=3", letter.gen),
    }
}

pub fn apply_word<G: Group>(g: &G, w: &BraidWord, q: &Quad<G::Elem>) -> Quad<G::Elem> {
    w.0.iter().fold(q.clone(), |acc, &l| apply_letter(g, l, &acc))
}

/// `a b^{-1} c d^{-1}`.
pub fn gamma<G: Group>(g: &G, q: &Quad<G::Elem>) -> G::Elem {
    let ab = g.mul(&q.a, &g.inv(&q.b));
    let cd = g.mul(&q.c, &g.inv(&q.d));
    g.mul(&ab, &cd)
}

/// `a^{-1} b c^{-1} d`.
pub fn delta<G: Group>(g: &G, q: &Quad<G::Elem>) -> G::Elem {
    let ab = g.mul(&g.inv(&q.a), &q.b);
    let cd = g.mul(&g.inv(&q.c), &q.d);
    g.mul(&ab, &cd)
}

pub fn epsilon<T: Clone>(q: &Quad<T>) -> Quad<T> {
    Quad::new(q.d.clone(), q.c.clone(), q.b.clone(), q.a.clone())
}

pub fn left_mul<G: Group>(g: &G, x: &G::Elem, q: &Quad<G::Elem>) -> Quad<G::Elem> {
    q.map(|e| g.mul(x, e))
}

pub fn right_mul<G: Group>(g: &G, q: &Quad<G::Elem>, x: &G::Elem) -> Quad<G::Elem> {
    q.map(|e| g.mul(e, x))
}

/// The word `(σ1σ2σ3)^4` generating the center of B4.
pub fn center_word() -> BraidWord {
    BraidWord(vec![Letter::sigma(1), Letter::sigma(2), Letter::sigma(3)]).pow(4)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("central element does not act as left multiplication by gamma and right by delta^-1")]
pub struct CenterMismatch;

/// Applies the central word and checks it agrees with `Q ↦ γ Q δ^{-1}`.
pub fn center_image<G: Group>(g: &G, q: &Quad<G::Elem>) -> Result<Quad<G::Elem>, CenterMismatch> {
    let image = apply_word(g, &center_word(), q);
    let expected = right_mul(g, &left_mul(g, &gamma(g, q), q), &g.inv(&delta(g, q)));
    if image == expected {
        Ok(image)
    } else {
        Err(CenterMismatch)
    }
}
