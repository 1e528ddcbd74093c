//! Named checks over a grid of `(n, ℓ)`, run concurrently.

use rayon::prelude::*;
use serde::Serialize;

use crate::form::{intertwiner_report, intertwiner_supported};
use crate::highest::{decomposition_check, expected_dim, highest_weight_basis, two_strand_eigenvalue};
use crate::module::{e_matrix, sigma_on_v, yang_baxter_check, SingleModule, WeightBasis};
use crate::qnum::qbinom_identity_check;
use crate::QrepError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed, detail: detail.into() }
    }

    fn from_result(name: impl Into<String>, r: Result<(bool, String), QrepError>) -> Self {
        match r {
            Ok((p, d)) => Self::new(name, p, d),
            Err(e) => Self::new(name, false, e.to_string()),
        }
    }
}

/// `E σ_i = σ_i E` from `V_{n,ℓ}` to `V_{n,ℓ-1}`.
pub fn e_commutes_with_braiding(n: usize, ell: u32) -> bool {
    if ell == 0 {
        return true;
    }
    let top = WeightBasis::new(n, ell);
    let low = WeightBasis::new(n, ell - 1);
    let e = e_matrix(&top);
    (1..n).all(|i| e.mul(&sigma_on_v(&top, i)) == sigma_on_v(&low, i).mul(&e))
}

/// Checks for one `(n, ℓ)`. The intertwiner checks solve a `d^2`-dimensional
/// linear system and are included when asked and supported.
pub fn verify_case(n: usize, ell: u32, with_intertwiner: bool) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let hw = match highest_weight_basis(n, ell) {
        Ok(h) => h,
        Err(e) => return vec![CheckResult::new("basis", false, e.to_string())],
    };
    let want = expected_dim(n, ell);
    out.push(CheckResult::new("dimension", hw.dim() as u64 == want, format!("{} (expected {want})", hw.dim())));
    out.push(CheckResult::new("kernel", hw.check_kernel(), "E B = 0"));
    out.push(CheckResult::new("E commutes with braiding", e_commutes_with_braiding(n, ell), ""));
    match hw.braid_matrices() {
        Ok(reps) => {
            out.push(CheckResult::new("braid relations", reps.check_braid_relations(), ""));
            out.push(CheckResult::new("inverses", reps.check_inverses(), ""));
            let tw = reps.full_twist_scalar();
            out.push(CheckResult::new(
                "full twist central",
                tw.is_some(),
                tw.map(|x| x.to_string()).unwrap_or_default(),
            ));
        }
        Err(e) => out.push(CheckResult::new("braid matrices", false, e.to_string())),
    }
    if n >= 3 {
        out.push(CheckResult::from_result(
            "restriction",
            decomposition_check(n, ell).map(|r| (r.ok(), format!("graded {:?}", r.graded_dims))),
        ));
    }
    if with_intertwiner && hw.dim() > 0 && intertwiner_supported(n, ell) {
        out.push(CheckResult::from_result(
            "intertwiner",
            intertwiner_report(n, ell).map(|r| {
                (
                    r.ok(),
                    format!(
                        "solutions {}, symmetry {:?}, matches twist {}, starred {}, hermitian {}",
                        r.solutions, r.symmetry, r.matches_twist, r.starred, r.hermitian
                    ),
                )
            }),
        ));
    }
    out
}

/// Checks that do not depend on `n`.
pub fn verify_global(max_ell: u32) -> Vec<CheckResult> {
    let mut out = vec![CheckResult::new(
        "single module relations",
        SingleModule { top: 6 }.check_relations(),
        "v_0..v_6",
    )];
    for t in 0..=6 {
        out.push(CheckResult::new(format!("q-binomial t={t}"), qbinom_identity_check(t), ""));
    }
    for ell in 0..=max_ell.max(4) {
        out.push(CheckResult::new(format!("Yang-Baxter l={ell}"), yang_baxter_check(ell), ""));
    }
    for ell in 1..=max_ell.max(4) {
        out.push(CheckResult::from_result(
            format!("two-strand eigenvalue l={ell}"),
            two_strand_eigenvalue(ell).map(|(a, b)| (a == b, a.to_string())),
        ));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct GridEntry {
    pub n: usize,
    pub ell: u32,
    pub checks: Vec<CheckResult>,
}

/// All `(n, ℓ)` with `2 <= n <= max_n`, `0 <= ℓ <= max_ell`, in order.
pub fn verify_grid(max_n: usize, max_ell: u32, with_intertwiner: bool) -> Vec<GridEntry> {
    let cases: Vec<(usize, u32)> = (2..=max_n).flat_map(|n| (0..=max_ell).map(move |l| (n, l))).collect();
    cases
        .par_iter()
        .map(|&(n, ell)| GridEntry {
            n,
            ell,
            checks: verify_case(n, ell, with_intertwiner),
        })
        .collect()
}
