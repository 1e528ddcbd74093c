//! The module `V` with basis `v_0, v_1, ...`, its tensor powers, the R-matrix
//! and the induced braid action on weight spaces.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::laurent::LaurentPoly2;
use crate::matrix::LMatrix;
use crate::qnum::{binomial_term, qbinom};

/// Compositions `(a_1, ..., a_n)` of `ℓ` in lexicographic order: the basis of `V_{n,ℓ}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightBasis {
    pub n: usize,
    pub ell: u32,
    pub comps: Vec<Vec<u32>>,
    #[serde(skip)]
    index: HashMap<Vec<u32>, usize>,
}

fn compositions(n: usize, ell: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if ell == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for a in 0..=ell {
        for mut rest in compositions(n - 1, ell - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

impl WeightBasis {
    pub fn new(n: usize, ell: u32) -> Self {
        let comps = compositions(n, ell);
        let index = comps.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        WeightBasis { n, ell, comps, index }
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn index_of(&self, c: &[u32]) -> Option<usize> {
        self.index.get(c).copied()
    }
}

/// `s q^{-k} - s^{-1} q^{k}`.
pub(crate) fn skew_factor(k: i32) -> LaurentPoly2 {
    binomial_term(1, -k, 1, -1, k, -1)
}

/// `prod_{k<n} (s q^{-k-j} - s^{-1} q^{k+j})`.
fn f_product(n: u32, j: u32) -> LaurentPoly2 {
    (0..n).fold(LaurentPoly2::one(), |acc, k| &acc * &skew_factor((k + j) as i32))
}

/// Coefficient of `v_{j+n}` in `F^{(n)} v_j`.
pub fn f_coefficient(n: u32, j: u32) -> LaurentPoly2 {
    &qbinom(n + j, j) * &f_product(n, j)
}

/// `R(v_i ⊗ v_j)` as `((j + n, i - n), coefficient)` for `n = 0..=i`.
pub fn r_matrix(i: u32, j: u32) -> Vec<((u32, u32), LaurentPoly2)> {
    (0..=i)
        .map(|n| {
            let qexp = 2 * (i - n) as i64 * (j + n) as i64 + (n as i64 * (n as i64 - 1)) / 2;
            let mono = LaurentPoly2::monomial(1, qexp as i32, -((i + j) as i32));
            ((j + n, i - n), &mono * &f_coefficient(n, j))
        })
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// `R^{-1}(v_i ⊗ v_j)`, from `R^{-1} = T D^{-1} bar(R) D T` with
/// `D(v_m ⊗ v_k) = q^{m(m+1) + k(k+1)} v_m ⊗ v_k` and `T` the flip.
pub fn r_matrix_inverse(i: u32, j: u32) -> Vec<((u32, u32), LaurentPoly2)> {
    let w = |a: u32, b: u32| (a * (a + 1) + b * (b + 1)) as i32;
    // T: v_i ⊗ v_j -> v_j ⊗ v_i, then D, bar(R), D^{-1}, T.
    let d_in = w(j, i);
    r_matrix(j, i)
        .into_iter()
        .map(|((a, b), c)| {
            let shift = d_in - w(a, b);
            ((b, a), c.bar().shift(shift, 0))
        })
        .collect()
}

fn pair_action(
    basis: &WeightBasis,
    i: usize,
    local: impl Fn(u32, u32) -> Vec<((u32, u32), LaurentPoly2)>,
) -> LMatrix {
    assert!(i >= 1 && i < basis.n, "generator index {i} outside 1..{}", basis.n);
    let dim = basis.len();
    let mut m = LMatrix::zeros(dim, dim);
    for (col, a) in basis.comps.iter().enumerate() {
        for ((x, y), c) in local(a[i - 1], a[i]) {
            let mut b = a.clone();
            b[i - 1] = x;
            b[i] = y;
            let row = basis.index_of(&b).expect("R preserves the weight");
            m[(row, col)] = &m[(row, col)] + &c;
        }
    }
    m
}

/// `σ_i` on `V_{n,ℓ}`: `R` on tensor factors `i, i+1` (1-based).
pub fn sigma_on_v(basis: &WeightBasis, i: usize) -> LMatrix {
    pair_action(basis, i, r_matrix)
}

pub fn sigma_inverse_on_v(basis: &WeightBasis, i: usize) -> LMatrix {
    pair_action(basis, i, r_matrix_inverse)
}

/// `E = Σ_k 1 ⊗ ... ⊗ E ⊗ K ⊗ ... ⊗ K` from `V_{n,ℓ}` to `V_{n,ℓ-1}`.
pub fn e_matrix(from: &WeightBasis) -> LMatrix {
    if from.ell == 0 {
        return LMatrix::zeros(0, from.len());
    }
    let to = WeightBasis::new(from.n, from.ell - 1);
    let mut m = LMatrix::zeros(to.len(), from.len());
    for (col, a) in from.comps.iter().enumerate() {
        for k in 0..a.len() {
            if a[k] == 0 {
                continue;
            }
            let tail: u32 = a[k + 1..].iter().sum();
            let coef = LaurentPoly2::monomial(1, -2 * tail as i32, (a.len() - k - 1) as i32);
            let mut b = a.clone();
            b[k] -= 1;
            let row = to.index_of(&b).unwrap();
            m[(row, col)] = &m[(row, col)] + &coef;
        }
    }
    m
}

/// Scalar by which `K` acts on `V_{n,ℓ}`: `s^n q^{-2ℓ}`.
pub fn k_eigenvalue(n: usize, ell: u32) -> LaurentPoly2 {
    LaurentPoly2::monomial(1, -2 * ell as i32, n as i32)
}

/// The operators `K, K^{-1}, E, F^{(n)}` on `span(v_0..v_{top})`, as maps on
/// coefficient vectors (entries past `top` are discarded).
pub struct SingleModule {
    pub top: u32,
}

type Vector = Vec<LaurentPoly2>;

impl SingleModule {
    fn zero(&self) -> Vector {
        vec![LaurentPoly2::zero(); self.top as usize + 1]
    }

    pub fn basis(&self, j: u32) -> Vector {
        let mut v = self.zero();
        v[j as usize] = LaurentPoly2::one();
        v
    }

    pub fn k(&self, v: &Vector, power: i32) -> Vector {
        v.iter()
            .enumerate()
            .map(|(j, x)| x * &LaurentPoly2::monomial(1, -2 * power * j as i32, power))
            .collect()
    }

    pub fn e(&self, v: &Vector) -> Vector {
        let mut out = self.zero();
        if !v.is_empty() {
            out[..v.len() - 1].clone_from_slice(&v[1..]);
        }
        out
    }

    pub fn f_divided(&self, n: u32, v: &Vector) -> Vector {
        let mut out = self.zero();
        for (j, x) in v.iter().enumerate() {
            let t = j + n as usize;
            if t < out.len() && !x.is_zero() {
                out[t] = &out[t] + &(x * &f_coefficient(n, j as u32));
            }
        }
        out
    }

    fn scale(v: &Vector, c: &LaurentPoly2) -> Vector {
        v.iter().map(|x| x * c).collect()
    }

    fn sub(a: &Vector, b: &Vector) -> Vector {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    /// `K E = q^2 E K`, `[E, F^{(n+1)}] = F^{(n)}(q^{-n}K - q^n K^{-1})` and
    /// `F^{(n)} F^{(m)} = [n+m choose n] F^{(n+m)}` on every basis vector
    /// whose images stay inside the truncation.
    pub fn check_relations(&self) -> bool {
        let top = self.top;
        for j in 0..=top {
            let v = self.basis(j);
            let ke = self.k(&self.e(&v), 1);
            let ek = Self::scale(&self.e(&self.k(&v, 1)), &LaurentPoly2::monomial(1, 2, 0));
            if ke != ek {
                return false;
            }
            for n in 0..top {
                if j + n + 1 > top {
                    break;
                }
                let lhs = Self::sub(&self.e(&self.f_divided(n + 1, &v)), &self.f_divided(n + 1, &self.e(&v)));
                let inner = Self::sub(
                    &Self::scale(&self.k(&v, 1), &LaurentPoly2::monomial(1, -(n as i32), 0)),
                    &Self::scale(&self.k(&v, -1), &LaurentPoly2::monomial(1, n as i32, 0)),
                );
                if lhs != self.f_divided(n, &inner) {
                    return false;
                }
            }
            for n in 0..=top {
                for m in 0..=top {
                    if j + n + m > top {
                        continue;
                    }
                    let lhs = self.f_divided(n, &self.f_divided(m, &v));
                    let rhs = Self::scale(&self.f_divided(n + m, &v), &qbinom(n + m, n));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// `σ_1σ_2σ_1 = σ_2σ_1σ_2` on `V_{3,ℓ}`, i.e. the Yang-Baxter equation for `R`.
pub fn yang_baxter_check(ell: u32) -> bool {
    let b = WeightBasis::new(3, ell);
    let s1 = sigma_on_v(&b, 1);
    let s2 = sigma_on_v(&b, 2);
    s1.mul(&s2).mul(&s1) == s2.mul(&s1).mul(&s2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_matrix_examples() {
        let r00 = r_matrix(0, 0);
        assert_eq!(r00, vec![((0, 0), LaurentPoly2::one())]);
        let r03 = r_matrix(0, 3);
        assert_eq!(r03, vec![((3, 0), LaurentPoly2::monomial(1, 0, -3))]);
        let r10 = r_matrix(1, 0);
        let s = LaurentPoly2::s();
        let si = LaurentPoly2::monomial(1, 0, -1);
        assert_eq!(r10[0], ((0, 1), si.clone()));
        assert_eq!(r10[1], ((1, 0), &si * &(&s - &si)));
    }

    #[test]
    fn compositions_in_lex_order() {
        let b = WeightBasis::new(3, 2);
        assert_eq!(b.len(), 6);
        assert_eq!(b.comps[0], vec![0, 0, 2]);
        assert_eq!(b.comps[5], vec![2, 0, 0]);
        assert_eq!(WeightBasis::new(4, 0).len(), 1);
    }
}
