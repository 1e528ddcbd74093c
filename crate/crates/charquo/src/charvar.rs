//! Trace coordinates of quadruples.
//!
//! A quadruple `(A, B, C, D)` determines the triple `M1 = B^{-1}A`,
//! `M2 = A^{-1}C`, `M3 = D^{-1}C`, and the seven traces
//! `(a, b, c, x, y, z, p)` of `M1, M2, M3, M2M3, M1M3, M1M2, M1M2M3`.
//!
//! Changing the sign of one lift `Mi` multiplies every trace containing `Mi`
//! an odd number of times by -1, which gives the three flips below. They
//! generate a group of order 8, and the canonical key is the least image.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braidquandle::Quad;
use crate::ffield::{ElementClass, FieldError, Mat2, PglElem, PrimeField, ProjMat2};

/// `(a, b, c, x, y, z, p)` with representatives in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TraceTuple(pub [u32; 7]);

/// The least flip image of a trace tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey(pub [u32; 7]);

/// Coordinates negated by flip 1, 2 and 3.
const FLIP_MASKS: [[bool; 7]; 3] = [
    [true, false, false, false, true, true, true],
    [false, true, false, true, false, true, true],
    [false, false, true, true, true, false, true],
];

pub fn from_quad(f: &PrimeField, q: &Quad<Mat2>) -> TraceTuple {
    let m1 = f.mat_mul(&f.adj(&q.b), &q.a);
    let m2 = f.mat_mul(&f.adj(&q.a), &q.c);
    let m3 = f.mat_mul(&f.adj(&q.d), &q.c);
    let m12 = f.mat_mul(&m1, &m2);
    TraceTuple([
        f.trace(&m1),
        f.trace(&m2),
        f.trace(&m3),
        f.trace_mul(&m2, &m3),
        f.trace_mul(&m1, &m3),
        f.trace(&m12),
        f.trace_mul(&m12, &m3),
    ])
}

pub fn from_proj_quad(f: &PrimeField, q: &Quad<ProjMat2>) -> TraceTuple {
    from_quad(f, &q.map(|m| m.0))
}

/// The polynomial action of `σi^{±1}` on trace tuples.
pub fn sigma_action(f: &PrimeField, gen: u8, inverse: bool, t: &TraceTuple) -> TraceTuple {
    let [a, b, c, x, y, z, p] = t.0;
    let m = |u, v| f.mul(u, v);
    let s = |u, v| f.sub(u, v);
    TraceTuple(match (gen, inverse) {
        (1, false) => [a, s(m(a, b), z), c, s(m(a, x), p), y, b, x],
        (1, true) => [a, z, c, p, y, s(m(a, z), b), s(m(a, p), x)],
        (2, false) => {
            let x2 = f.add(s(s(m(m(a, c), z), m(a, p)), m(b, c)), x);
            [s(m(a, z), b), a, s(m(c, z), p), x2, y, z, c]
        }
        (2, true) => {
            let (a0, b0, c0, p0) = (b, s(m(b, z), a), p, s(m(p, z), c));
            let x0 = s(f.add(f.add(x, m(a0, p0)), m(b0, c0)), m(m(a0, c0), z));
            [a0, b0, c0, x0, y, z, p0]
        }
        (3, false) => [a, x, c, s(m(c, x), b), y, p, s(m(c, p), z)],
        (3, true) => [a, s(m(c, b), x), c, b, y, s(m(c, z), p), z],
        _ => panic!("braid letter index {gen} outside 1..=3"),
    })
}

/// Image of `t` under the flips selected by the bits of `mask` (bit i = flip i+1).
pub fn flip(f: &PrimeField, mask: u8, t: &TraceTuple) -> TraceTuple {
    let mut out = t.0;
    for (i, fm) in FLIP_MASKS.iter().enumerate() {
        if mask >> i & 1 == 1 {
            for (k, &neg) in fm.iter().enumerate() {
                if neg {
                    out[k] = f.neg(out[k]);
                }
            }
        }
    }
    TraceTuple(out)
}

pub fn canonicalize(f: &PrimeField, t: &TraceTuple) -> CanonicalKey {
    let mut best = t.0;
    for mask in 1..8u8 {
        let cand = flip(f, mask, t).0;
        if cand < best {
            best = cand;
        }
    }
    CanonicalKey(best)
}

pub fn fast_key(f: &PrimeField, q: &Quad<ProjMat2>) -> CanonicalKey {
    canonicalize(f, &from_proj_quad(f, q))
}

pub fn fricke_value(f: &PrimeField, t: &TraceTuple) -> u32 {
    let [a, b, c, x, y, z, p] = t.0;
    let m = |u, v| f.mul(u, v);
    let lin = f.sub(
        f.add(f.add(m(a, x), m(b, y)), m(c, z)),
        m(m(a, b), c),
    );
    let sq = [a, b, c, x, y, z]
        .iter()
        .fold(0, |acc, &v| f.add(acc, m(v, v)));
    let cst = f.sub(
        f.add(sq, m(m(x, y), z)),
        f.add(f.add(m(m(a, b), z), m(m(b, c), x)), f.add(m(m(c, a), y), 4)),
    );
    f.add(f.sub(m(p, p), m(lin, p)), cst)
}

pub fn fricke_check(f: &PrimeField, t: &TraceTuple) -> bool {
    fricke_value(f, t) == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("gamma is {0:?}; a split or non-split element is required")]
    GammaNotTorus(ElementClass),
    #[error("delta is {0:?}; a split or non-split element is required")]
    DeltaNotTorus(ElementClass),
    #[error("matrix does not have determinant one")]
    NotSl2,
}

/// Fixed `γ, δ` in SL2 together with their torus centralizers in PGL2.
#[derive(Debug, Clone)]
pub struct Params {
    pub field: PrimeField,
    pub gamma: Mat2,
    pub delta: Mat2,
    pub t_gamma: u32,
    pub t_delta: u32,
    pub gamma_class: ElementClass,
    pub delta_class: ElementClass,
    pub cent_gamma: Vec<PglElem>,
    pub cent_delta: Vec<PglElem>,
}

impl Params {
    pub fn new(field: PrimeField, gamma: Mat2, delta: Mat2) -> Result<Params, ParamsError> {
        if field.det(&gamma) != 1 || field.det(&delta) != 1 {
            return Err(ParamsError::NotSl2);
        }
        let gp = field.proj(gamma);
        let dp = field.proj(delta);
        let cent_gamma = field.centralizer_pgl(&gp).map_err(|e| match e {
            FieldError::NoTorus(c) => ParamsError::GammaNotTorus(c),
            _ => unreachable!(),
        })?;
        let cent_delta = field.centralizer_pgl(&dp).map_err(|e| match e {
            FieldError::NoTorus(c) => ParamsError::DeltaNotTorus(c),
            _ => unreachable!(),
        })?;
        Ok(Params {
            field,
            gamma,
            delta,
            t_gamma: field.trace(&gamma),
            t_delta: field.trace(&delta),
            gamma_class: field.classify(&gp),
            delta_class: field.classify(&dp),
            cent_gamma,
            cent_delta,
        })
    }

    /// One of `γ, δ` split and the other non-split.
    pub fn opposite_tori(&self) -> bool {
        matches!(
            (self.gamma_class, self.delta_class),
            (ElementClass::Split, ElementClass::NonSplit) | (ElementClass::NonSplit, ElementClass::Split)
        )
    }

    /// Pairs `(g, h)` of centralizer elements with equal determinant class.
    pub fn twist_pairs(&self) -> impl Iterator<Item = (&PglElem, &PglElem)> + '_ {
        self.cent_delta.iter().flat_map(move |h| {
            self.cent_gamma
                .iter()
                .filter(move |g| g.square_det == h.square_det)
                .map(move |g| (g, h))
        })
    }
}

pub fn membership(t: &TraceTuple, params: &Params) -> bool {
    let f = &params.field;
    if !fricke_check(f, t) {
        return false;
    }
    let sum = f.add(params.t_gamma, params.t_delta);
    (0..8u8).any(|mask| {
        let [a, b, c, x, y, z, p] = flip(f, mask, t).0;
        let lin = f.sub(f.add(f.mul(a, c), f.mul(b, p)), f.mul(x, z));
        [false, true].iter().any(|&neg| {
            let (ty, ts) = if neg {
                (f.neg(params.t_delta), f.neg(sum))
            } else {
                (params.t_delta, sum)
            };
            y == ty && lin == ts
        })
    })
}

/// The least quadruple `g Q h` over centralizer pairs of equal determinant class.
pub fn key_exact(q: &Quad<ProjMat2>, params: &Params) -> Quad<ProjMat2> {
    let f = &params.field;
    let mut best: Option<Quad<ProjMat2>> = None;
    for h in &params.cent_delta {
        let ah = f.mat_mul(&q.a.0, &h.m);
        let mut rest: Option<[Mat2; 3]> = None;
        for g in params.cent_gamma.iter().filter(|g| g.square_det == h.square_det) {
            let first = twist_premul(f, g, &ah);
            if let Some(b) = &best {
                if first > b.a {
                    continue;
                }
            }
            let [bh, ch, dh] = *rest.get_or_insert_with(|| {
                [
                    f.mat_mul(&q.b.0, &h.m),
                    f.mat_mul(&q.c.0, &h.m),
                    f.mat_mul(&q.d.0, &h.m),
                ]
            });
            let cand = Quad::new(
                first,
                twist_premul(f, g, &bh),
                twist_premul(f, g, &ch),
                twist_premul(f, g, &dh),
            );
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.expect("centralizers contain the identity")
}

#[inline]
fn twist_premul(f: &PrimeField, g: &PglElem, xh: &Mat2) -> ProjMat2 {
    let m = f.mat_mul(&g.m, xh);
    if g.square_det {
        f.proj(m)
    } else {
        f.proj(f.scale(&m, f.inv(f.det(&g.m)).unwrap()))
    }
}
