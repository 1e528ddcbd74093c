//! Reduction of the braid matrices modulo a prime at a point `(q0, s0)`.

use serde::Serialize;

use crate::form::{form_denominator, form_on_v, form_on_w, intertwiner_space, intertwiner_supported};
use crate::highest::highest_weight_basis;
use crate::laurent::RationalFn2;
use crate::matrix::ModMatrix;
use crate::QrepError;

pub fn is_prime(r: u64) -> bool {
    if r < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= r {
        if r % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_point(r: u64, q0: u64, s0: u64) -> Result<(), QrepError> {
    if !is_prime(r) || r > u32::MAX as u64 {
        return Err(QrepError::Range(format!("modulus {r} must be a prime below 2^32")));
    }
    if q0 % r == 0 || s0 % r == 0 {
        return Err(QrepError::BadPoint(format!("q0 = {q0} and s0 = {s0} must be nonzero mod {r}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Specialization {
    pub n: usize,
    pub ell: u32,
    pub r: u64,
    pub q0: u64,
    pub s0: u64,
    #[serde(skip)]
    pub gens: Vec<ModMatrix>,
    #[serde(skip)]
    pub inverses: Vec<ModMatrix>,
    #[serde(skip)]
    pub j: ModMatrix,
    pub relations_hold: bool,
    pub inverses_hold: bool,
    /// `J S_i^T = S_i J` after reduction.
    pub intertwiner_holds: bool,
    /// `σ_1` and `σ_{n-1}` differ projectively.
    pub first_last_distinct: bool,
    /// `σ_1 σ_{n-1}^{-1}` is scalar.
    pub first_last_ratio_scalar: bool,
}

impl Specialization {
    pub fn ok(&self) -> bool {
        self.relations_hold
            && self.inverses_hold
            && self.intertwiner_holds
            && self.first_last_distinct
            && !self.first_last_ratio_scalar
    }
}

fn braid_relations_mod(gens: &[ModMatrix]) -> bool {
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let (a, b) = (&gens[i], &gens[j]);
            let ok = if j == i + 1 {
                a.mul(b).mul(a) == b.mul(a).mul(b)
            } else {
                a.mul(b) == b.mul(a)
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Reduces `S_i`, `S_i^{-1}` and `J` for `W_{n,ℓ}` at `(q0, s0)` mod `r`.
/// Fails when a denominator of the form vanishes at the point (naming the
/// entry) or when `J` becomes singular.
pub fn specialize(n: usize, ell: u32, r: u64, q0: u64, s0: u64) -> Result<Specialization, QrepError> {
    check_point(r, q0, s0)?;
    if !intertwiner_supported(n, ell) {
        return Err(QrepError::Range(format!("intertwiner solve not supported for n = {n}, l = {ell}")));
    }
    specialize_form(n, ell, r, q0, s0)?;
    let hw = highest_weight_basis(n, ell)?;
    let reps = hw.braid_matrices()?;
    let space = intertwiner_space(&reps);
    if space.len() != 1 {
        return Err(QrepError::Check(format!(
            "intertwiner space has dimension {} instead of 1",
            space.len()
        )));
    }
    let j = space[0].eval_mod(r, q0, s0)?;
    if !j.is_invertible() {
        return Err(QrepError::BadPoint(format!(
            "J is singular at q0 = {q0}, s0 = {s0} mod {r}"
        )));
    }
    let gens = reps
        .gens
        .iter()
        .map(|g| g.eval_mod(r, q0, s0))
        .collect::<Result<Vec<_>, _>>()?;
    let inverses = reps
        .inverses
        .iter()
        .map(|g| g.eval_mod(r, q0, s0))
        .collect::<Result<Vec<_>, _>>()?;
    let d = reps.dim();
    let id = ModMatrix::identity(r, d);
    let inverses_hold = gens.iter().zip(&inverses).all(|(g, h)| g.mul(h) == id);
    let intertwiner_holds = gens.iter().all(|g| j.mul(&g.transpose()) == g.mul(&j));
    let first = &gens[0];
    let last = &gens[gens.len() - 1];
    let ratio = first.mul(&inverses[inverses.len() - 1]);
    Ok(Specialization {
        n,
        ell,
        r,
        q0,
        s0,
        relations_hold: braid_relations_mod(&gens),
        inverses_hold,
        intertwiner_holds,
        first_last_distinct: !first.projectively_equal(last),
        first_last_ratio_scalar: ratio.as_scalar().is_some(),
        gens,
        inverses,
        j,
    })
}

/// The form on `W_{n,ℓ}` (divided by its common denominator) at `(q0, s0)` mod `r`.
/// Fails naming the first entry whose denominator vanishes.
pub fn specialize_form(n: usize, ell: u32, r: u64, q0: u64, s0: u64) -> Result<ModMatrix, QrepError> {
    check_point(r, q0, s0)?;
    let hw = highest_weight_basis(n, ell)?;
    let h = form_on_w(&hw, &form_on_v(&hw)?);
    let den = form_denominator(n, ell);
    let d = hw.dim();
    let mut data = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let x = RationalFn2::new(h[(a, b)].clone(), den.clone())?;
            let v = x.eval_mod(r, q0, s0).map_err(|e| match e {
                QrepError::BadPoint(msg) => QrepError::BadPoint(format!("form entry ({a}, {b}): {msg}")),
                other => other,
            })?;
            data.push(v);
        }
    }
    Ok(ModMatrix { r, n: d, m: d, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(1009));
        assert!(!is_prime(1001));
        assert!(!is_prime(1));
    }

    #[test]
    fn rejects_bad_points() {
        assert!(matches!(specialize(4, 1, 1009, 0, 3), Err(QrepError::BadPoint(_))));
        assert!(matches!(specialize(4, 1, 1009, 2018, 3), Err(QrepError::BadPoint(_))));
        assert!(matches!(specialize(4, 1, 1000, 2, 3), Err(QrepError::Range(_))));
    }
}
