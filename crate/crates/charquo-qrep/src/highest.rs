//! The highest-weight space `W_{n,ℓ} = ker(E: V_{n,ℓ} -> V_{n,ℓ-1})` and the
//! braid action on it.
//!
//! Coordinates with `a_1 = 0` are free: for each such composition `f` there is
//! a unique kernel vector equal to `1` at `f` and `0` at every other `a_1 = 0`
//! coordinate. The remaining coordinates are solved level by level in `a_1`,
//! and each step divides only by a monomial, so the basis is integral.

use crate::laurent::LaurentPoly2;
use crate::matrix::{kernel, LMatrix};
use crate::module::{e_matrix, sigma_inverse_on_v, sigma_on_v, WeightBasis};
use crate::QrepError;

#[derive(Debug, Clone)]
pub struct HighestWeight {
    pub n: usize,
    pub ell: u32,
    pub v: WeightBasis,
    /// Indices into `v` of the free coordinates, in basis order.
    pub free: Vec<usize>,
    /// `dim V × dim W`, columns are the basis of `W`.
    pub b: LMatrix,
}

/// Coefficient of `v_{a - e_k}` in `E v_a` (`k` 0-based), for `a_k > 0`.
fn e_coef(a: &[u32], k: usize) -> LaurentPoly2 {
    let tail: u32 = a[k + 1..].iter().sum();
    LaurentPoly2::monomial(1, -2 * tail as i32, (a.len() - k - 1) as i32)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `C(n+ℓ-2, ℓ)`.
pub fn expected_dim(n: usize, ell: u32) -> u64 {
    if n < 2 {
        return u64::from(ell == 0);
    }
    binomial(n as u64 + ell as u64 - 2, ell as u64)
}

pub fn highest_weight_basis(n: usize, ell: u32) -> Result<HighestWeight, QrepError> {
    if n < 2 {
        return Err(QrepError::Range(format!("need at least two tensor factors, got {n}")));
    }
    let v = WeightBasis::new(n, ell);
    let free: Vec<usize> = (0..v.len()).filter(|&i| v.comps[i][0] == 0).collect();
    let mut order: Vec<usize> = (0..v.len()).filter(|&i| v.comps[i][0] > 0).collect();
    order.sort_by_key(|&i| v.comps[i][0]);
    let mut cols = Vec::with_capacity(free.len());
    for &f in &free {
        let mut w = vec![LaurentPoly2::zero(); v.len()];
        w[f] = LaurentPoly2::one();
        for &ai in &order {
            let a = &v.comps[ai];
            // the equation (E w)[a - e_1] = 0 determines w[a]
            let mut b = a.clone();
            b[0] -= 1;
            let mut acc = LaurentPoly2::zero();
            for k in 1..n {
                let mut src = b.clone();
                src[k] += 1;
                let si = v.index_of(&src).unwrap();
                if !w[si].is_zero() {
                    acc = &acc + &(&e_coef(&src, k) * &w[si]);
                }
            }
            let c = e_coef(a, 0).unit_inverse().expect("monomial");
            w[ai] = -&(&acc * &c);
        }
        cols.push(w);
    }
    let b = LMatrix::from_columns(v.len(), &cols);
    Ok(HighestWeight { n, ell, v, free, b })
}

impl HighestWeight {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// `E·B = 0`.
    pub fn check_kernel(&self) -> bool {
        e_matrix(&self.v).mul(&self.b).is_zero()
    }

    /// Restriction of an endomorphism `x` of `V_{n,ℓ}` that preserves `W`:
    /// the free rows of `x·B`. Fails if `x·B ≠ B·(free rows)`.
    pub fn restrict(&self, x: &LMatrix) -> Result<LMatrix, QrepError> {
        let xb = x.mul(&self.b);
        let s = xb.select_rows(&self.free);
        if self.b.mul(&s) != xb {
            return Err(QrepError::Check("operator does not preserve the highest-weight space".into()));
        }
        Ok(s)
    }

    /// Generators `S_1..S_{n-1}` and their inverses on `W`.
    pub fn braid_matrices(&self) -> Result<RepMatrices, QrepError> {
        let mut gens = Vec::new();
        let mut inverses = Vec::new();
        for i in 1..self.n {
            gens.push(self.restrict(&sigma_on_v(&self.v, i))?);
            inverses.push(self.restrict(&sigma_inverse_on_v(&self.v, i))?);
        }
        Ok(RepMatrices { n: self.n, ell: self.ell, gens, inverses })
    }

    /// `U_m`: vectors of `W` supported on coordinates with `a_1 <= m`, as
    /// kernel vectors in `W` coordinates.
    pub fn filtration_piece(&self, m: u32) -> Vec<Vec<LaurentPoly2>> {
        let rows: Vec<usize> = (0..self.v.len()).filter(|&i| self.v.comps[i][0] > m).collect();
        if rows.is_empty() {
            return identity_columns(self.dim());
        }
        kernel(&self.b.select_rows(&rows))
    }
}

fn identity_columns(d: usize) -> Vec<Vec<LaurentPoly2>> {
    (0..d)
        .map(|i| {
            let mut v = vec![LaurentPoly2::zero(); d];
            v[i] = LaurentPoly2::one();
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepMatrices {
    pub n: usize,
    pub ell: u32,
    pub gens: Vec<LMatrix>,
    pub inverses: Vec<LMatrix>,
}

impl RepMatrices {
    pub fn dim(&self) -> usize {
        self.gens.first().map_or(0, |g| g.rows())
    }

    /// 1-based generator.
    pub fn sigma(&self, i: usize) -> &LMatrix {
        &self.gens[i - 1]
    }

    pub fn sigma_inv(&self, i: usize) -> &LMatrix {
        &self.inverses[i - 1]
    }

    /// `σ_iσ_{i+1}σ_i = σ_{i+1}σ_iσ_{i+1}` and `σ_iσ_j = σ_jσ_i` for `|i-j| > 1`.
    pub fn check_braid_relations(&self) -> bool {
        braid_relations_hold(&self.gens)
    }

    pub fn check_inverses(&self) -> bool {
        let id = LMatrix::identity(self.dim());
        self.gens.iter().zip(&self.inverses).all(|(g, h)| g.mul(h) == id && h.mul(g) == id)
    }

    /// `(σ_1⋯σ_{n-1})^n` as a scalar, if it is one.
    pub fn full_twist_scalar(&self) -> Option<LaurentPoly2> {
        let d = self.dim();
        LMatrix::product(d, &self.gens).pow(self.n as u32).as_scalar()
    }
}

pub fn braid_relations_hold(gens: &[LMatrix]) -> bool {
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

/// `S_1` on the one-dimensional `W_{2,ℓ}` and the expected value
/// `(-1)^ℓ q^{ℓ(ℓ-1)} s^{-2ℓ}`.
pub fn two_strand_eigenvalue(ell: u32) -> Result<(LaurentPoly2, LaurentPoly2), QrepError> {
    let hw = highest_weight_basis(2, ell)?;
    let reps = hw.braid_matrices()?;
    let got = reps.sigma(1)[(0, 0)].clone();
    let sign = if ell % 2 == 0 { 1 } else { -1 };
    let l = ell as i32;
    Ok((got, LaurentPoly2::monomial(sign, l * (l - 1), -2 * l)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    /// `dim U_m - dim U_{m-1}` for `m = 0..=ℓ`.
    pub graded_dims: Vec<usize>,
    /// `dim W_{n-1,ℓ-m}` for `m = 0..=ℓ`.
    pub expected: Vec<u64>,
    pub invariant: bool,
    pub traces_match: bool,
}

impl DecompositionReport {
    pub fn ok(&self) -> bool {
        self.invariant
            && self.traces_match
            && self.graded_dims.iter().zip(&self.expected).all(|(&a, &b)| a as u64 == b)
    }
}

/// Restriction to `B_{n-1}` on the last `n-1` strands: the filtration by the
/// first tensor coordinate has graded pieces `W_{n-1,ℓ-m}`, each piece is
/// invariant under `σ_2..σ_{n-1}`, and traces add up.
pub fn decomposition_check(n: usize, ell: u32) -> Result<DecompositionReport, QrepError> {
    if n < 3 {
        return Err(QrepError::Range(format!("restriction needs n >= 3, got {n}")));
    }
    let hw = highest_weight_basis(n, ell)?;
    let reps = hw.braid_matrices()?;
    let mut graded_dims = Vec::new();
    let mut expected = Vec::new();
    let mut invariant = true;
    let mut prev = 0usize;
    for m in 0..=ell {
        let piece = hw.filtration_piece(m);
        graded_dims.push(piece.len() - prev);
        prev = piece.len();
        expected.push(expected_dim(n - 1, ell - m));
        let outside: Vec<usize> = (0..hw.v.len()).filter(|&i| hw.v.comps[i][0] > m).collect();
        if outside.is_empty() {
            continue;
        }
        let proj = hw.b.select_rows(&outside);
        let basis = LMatrix::from_columns(hw.dim(), &piece);
        for i in 2..n {
            if !proj.mul(&reps.sigma(i).mul(&basis)).is_zero() {
                invariant = false;
            }
        }
    }

    let d = hw.dim();
    let mut lhs: Vec<LaurentPoly2> = (2..n).map(|i| reps.sigma(i).trace()).collect();
    lhs.push(LMatrix::product(d, &reps.gens[1..]).trace());
    let mut rhs = vec![LaurentPoly2::zero(); lhs.len()];
    for k in 0..=ell {
        let sub = highest_weight_basis(n - 1, k)?;
        if sub.dim() == 0 {
            continue;
        }
        let sr = sub.braid_matrices()?;
        for i in 2..n {
            rhs[i - 2] = &rhs[i - 2] + &sr.sigma(i - 1).trace();
        }
        let last = rhs.len() - 1;
        rhs[last] = &rhs[last] + &LMatrix::product(sub.dim(), &sr.gens).trace();
    }
    Ok(DecompositionReport { graded_dims, expected, invariant, traces_match: lhs == rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_strands_level_one() {
        let hw = highest_weight_basis(2, 1).unwrap();
        assert_eq!(hw.dim(), 1);
        assert!(hw.check_kernel());
        let (got, want) = two_strand_eigenvalue(1).unwrap();
        assert_eq!(got, want);
        assert_eq!(got.to_string(), "-s^-2");
    }

    #[test]
    fn dims_small() {
        for n in 2..5 {
            for ell in 0..3 {
                assert_eq!(highest_weight_basis(n, ell).unwrap().dim() as u64, expected_dim(n, ell));
            }
        }
        assert!(highest_weight_basis(1, 0).is_err());
    }
}
