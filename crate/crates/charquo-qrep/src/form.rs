//! The sesquilinear form on `V_{n,ℓ}` and `W_{n,ℓ}`, the antilinear twist,
//! and the linear intertwiner `J` between `S_i` and `S_i^T`.

use crate::highest::{highest_weight_basis, HighestWeight, RepMatrices};
use crate::laurent::LaurentPoly2;
use crate::matrix::{kernel, LMatrix};
use crate::module::{sigma_on_v, skew_factor};
use crate::qnum::qfact;
use crate::QrepError;

/// `h_m = (q - q^{-1})^m / ([m]! prod_{k<m} c_k)` with `c_k = s q^{-k} - s^{-1} q^k`,
/// as (numerator, denominator).
pub fn h_value(m: u32) -> (LaurentPoly2, LaurentPoly2) {
    let qq = &LaurentPoly2::q() - &LaurentPoly2::monomial(1, -1, 0);
    let den = (0..m).fold(qfact(m), |acc, k| &acc * &skew_factor(k as i32));
    (qq.pow(m), den)
}

/// Common denominator `[ℓ]! prod_{j<ℓ} c_j^{min(n, ⌊ℓ/(j+1)⌋)}` of the form on `V_{n,ℓ}`.
pub fn form_denominator(n: usize, ell: u32) -> LaurentPoly2 {
    (0..ell).fold(qfact(ell), |acc, j| {
        let e = (n as u32).min(ell / (j + 1));
        &acc * &skew_factor(j as i32).pow(e)
    })
}

fn reversed(a: &[u32]) -> Vec<u32> {
    a.iter().rev().copied().collect()
}

/// The form on `V_{n,ℓ}` scaled by [`form_denominator`]:
/// `H[I, rev I] = D · prod_k h_{I_k}`, zero elsewhere.
pub fn form_on_v(hw: &HighestWeight) -> Result<LMatrix, QrepError> {
    let v = &hw.v;
    let d = form_denominator(v.n, v.ell);
    let mut h = LMatrix::zeros(v.len(), v.len());
    for (i, a) in v.comps.iter().enumerate() {
        let (num, den) = a.iter().fold((d.clone(), LaurentPoly2::one()), |(n, dd), &x| {
            let (hn, hd) = h_value(x);
            (&n * &hn, &dd * &hd)
        });
        let entry = num
            .div_exact(&den)
            .ok_or_else(|| QrepError::Check(format!("form entry at {a:?} is not integral")))?;
        let j = v.index_of(&reversed(a)).unwrap();
        h[(i, j)] = entry;
    }
    Ok(h)
}

/// `B^T H bar(B)`, the form restricted to `W` (same denominator).
pub fn form_on_w(hw: &HighestWeight, hv: &LMatrix) -> LMatrix {
    hw.b.transpose().mul(hv).mul(&hw.b.bar())
}

/// `X_i^T H bar(X_{n-i}) = H` for every generator.
pub fn starred_identities(gens: &[LMatrix], h: &LMatrix) -> bool {
    let n = gens.len() + 1;
    (1..n).all(|i| gens[i - 1].transpose().mul(h).mul(&gens[n - i - 1].bar()) == *h)
}

/// `H/D` is hermitian: `H bar(D) = bar(H)^T D`.
pub fn is_hermitian(h: &LMatrix, d: &LaurentPoly2) -> bool {
    h.scale(&d.bar()) == h.bar().transpose().scale(d)
}

/// `DT` on `V_{n,ℓ}`: `v_I -> q^{Σ I_k(I_k+1)} v_{rev I}`.
pub fn twist_on_v(hw: &HighestWeight) -> LMatrix {
    let v = &hw.v;
    let mut m = LMatrix::zeros(v.len(), v.len());
    for (i, a) in v.comps.iter().enumerate() {
        let e: u32 = a.iter().map(|x| x * (x + 1)).sum();
        m[(v.index_of(&reversed(a)).unwrap(), i)] = LaurentPoly2::monomial(1, e as i32, 0);
    }
    m
}

/// The matrix `M` of the antilinear twist on `W`: `(DT)^{-1} bar(B) = B M`.
pub fn twist_on_w(hw: &HighestWeight) -> Result<LMatrix, QrepError> {
    let v = &hw.v;
    let bb = hw.b.bar();
    let mut full = LMatrix::zeros(v.len(), hw.dim());
    for (i, a) in v.comps.iter().enumerate() {
        let e: u32 = a.iter().map(|x| x * (x + 1)).sum();
        let src = v.index_of(&reversed(a)).unwrap();
        for c in 0..hw.dim() {
            full[(i, c)] = bb[(src, c)].shift(-(e as i32), 0);
        }
    }
    let m = full.select_rows(&hw.free);
    if hw.b.mul(&m) != full {
        return Err(QrepError::Check("twist does not preserve the highest-weight space".into()));
    }
    Ok(m)
}

/// `X_i M bar(X_{n-i}) = M`.
pub fn twist_identities(gens: &[LMatrix], m: &LMatrix) -> bool {
    let n = gens.len() + 1;
    (1..n).all(|i| gens[i - 1].mul(m).mul(&gens[n - i - 1].bar()) == *m)
}

/// `bar(σ_{n-i}) DT σ_i = DT` on `V`.
pub fn twist_identities_on_v(hw: &HighestWeight) -> bool {
    let dt = twist_on_v(hw);
    let n = hw.n;
    let s: Vec<LMatrix> = (1..n).map(|i| sigma_on_v(&hw.v, i)).collect();
    (1..n).all(|i| s[n - i - 1].bar().mul(&dt).mul(&s[i - 1]) == dt)
}

/// Nullspace of `J ↦ (J S_i^T - S_i J)_i` on `d × d` matrices.
pub fn intertwiner_space(reps: &RepMatrices) -> Vec<LMatrix> {
    let d = reps.dim();
    let mut sys = LMatrix::zeros(reps.gens.len() * d * d, d * d);
    for (g, s) in reps.gens.iter().enumerate() {
        let base = g * d * d;
        // (J S^T)[a][b] = Σ_c J[a][c] S[b][c],  (S J)[a][b] = Σ_c S[a][c] J[c][b]
        for a in 0..d {
            for b in 0..d {
                let row = base + a * d + b;
                for c in 0..d {
                    if !s[(b, c)].is_zero() {
                        let k = a * d + c;
                        sys[(row, k)] = &sys[(row, k)] + &s[(b, c)];
                    }
                    if !s[(a, c)].is_zero() {
                        let k = c * d + b;
                        sys[(row, k)] = &sys[(row, k)] - &s[(a, c)];
                    }
                }
            }
        }
    }
    kernel(&sys)
        .into_iter()
        .map(|v| {
            let rows = v.chunks(d).map(|r| r.to_vec()).collect();
            LMatrix::from_rows(rows).expect("square").normalize()
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct JReport {
    pub n: usize,
    pub ell: u32,
    pub dim: usize,
    /// Dimension of the space of intertwiners.
    pub solutions: usize,
    pub j: Option<LMatrix>,
    /// `J H ∝ M`, from the form and the twist.
    pub matches_twist: bool,
    /// `J^T = ±J`.
    pub symmetry: Option<i8>,
    /// `J (S_i^{-1})^T = S_i^{-1} J`.
    pub inverses_intertwined: bool,
    pub hermitian: bool,
    pub starred: bool,
    pub twist: bool,
}

impl JReport {
    pub fn ok(&self) -> bool {
        self.solutions == 1
            && self.matches_twist
            && self.symmetry.is_some()
            && self.inverses_intertwined
            && self.hermitian
            && self.starred
            && self.twist
    }
}

/// Range where the exact nullspace for `J` stays within `i128` coefficients
/// and a few seconds: `ℓ <= 2`, or `ℓ = 3` with three strands.
pub fn intertwiner_supported(n: usize, ell: u32) -> bool {
    ell <= 2 || (ell == 3 && n <= 3)
}

pub fn intertwiner_report(n: usize, ell: u32) -> Result<JReport, QrepError> {
    if !intertwiner_supported(n, ell) {
        return Err(QrepError::Range(format!("intertwiner solve not supported for n = {n}, l = {ell}")));
    }
    let hw = highest_weight_basis(n, ell)?;
    let reps = hw.braid_matrices()?;
    let hv = form_on_v(&hw)?;
    let hwf = form_on_w(&hw, &hv);
    let d = form_denominator(n, ell);
    let m = twist_on_w(&hw)?;
    let space = intertwiner_space(&reps);
    let j = if space.len() == 1 { Some(space[0].clone()) } else { None };
    let (matches_twist, symmetry, inverses_intertwined) = match &j {
        Some(j) => {
            let sym = if j.transpose() == *j {
                Some(1)
            } else if j.transpose() == j.scale(&LaurentPoly2::constant(-1)) {
                Some(-1)
            } else {
                None
            };
            let inv = reps
                .inverses
                .iter()
                .all(|t| j.mul(&t.transpose()) == t.mul(j));
            (j.mul(&hwf).proportional(&m), sym, inv)
        }
        None => (false, None, false),
    };
    Ok(JReport {
        n,
        ell,
        dim: hw.dim(),
        solutions: space.len(),
        j,
        matches_twist,
        symmetry,
        inverses_intertwined,
        hermitian: is_hermitian(&hv, &d) && is_hermitian(&hwf, &d),
        starred: starred_identities(&reps.gens, &hwf)
            && starred_identities(&(1..n).map(|i| sigma_on_v(&hw.v, i)).collect::<Vec<_>>(), &hv),
        twist: twist_identities(&reps.gens, &m) && twist_identities_on_v(&hw),
    })
}
