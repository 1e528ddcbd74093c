//! Balanced quantum integers, factorials and binomials.

use crate::laurent::LaurentPoly2;

/// `[n]_q = q^{n-1} + q^{n-3} + ... + q^{1-n}`.
pub fn qnum(n: u32) -> LaurentPoly2 {
    LaurentPoly2::from_terms((0..n as i32).map(|k| crate::laurent::Term {
        eq: n as i32 - 1 - 2 * k,
        es: 0,
        c: 1,
    }))
}

pub fn qfact(n: u32) -> LaurentPoly2 {
    (1..=n).fold(LaurentPoly2::one(), |acc, k| &acc * &qnum(k))
}

/// `[n choose k]_q`, zero when `k > n`.
pub fn qbinom(n: u32, k: u32) -> LaurentPoly2 {
    if k > n {
        return LaurentPoly2::zero();
    }
    let den = &qfact(k) * &qfact(n - k);
    qfact(n)
        .div_exact(&den)
        .expect("q-binomial quotient is a Laurent polynomial")
}

/// `q^a - q^{-a}` style binomials: `c1 q^e1 s^f1 + c2 q^e2 s^f2`.
pub(crate) fn binomial_term(c1: i128, e1: i32, f1: i32, c2: i128, e2: i32, f2: i32) -> LaurentPoly2 {
    &LaurentPoly2::monomial(c1, e1, f1) + &LaurentPoly2::monomial(c2, e2, f2)
}

/// Polynomials in an auxiliary variable `x` with Laurent coefficients, lowest degree first.
fn xpoly_mul(a: &[LaurentPoly2], b: &[LaurentPoly2]) -> Vec<LaurentPoly2> {
    let mut out = vec![LaurentPoly2::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// Checks `sum_m [t m]_q x^m = prod_{k<t} (x + q^{1-t+2k})` coefficientwise and,
/// for `t >= 1`, the specialization `sum_m (-1)^m q^{m(1-t)} [t m]_q = 0`.
pub fn qbinom_identity_check(t: u32) -> bool {
    let lhs: Vec<LaurentPoly2> = (0..=t).map(|m| qbinom(t, m)).collect();
    let rhs = (0..t as i32).fold(vec![LaurentPoly2::one()], |acc, k| {
        xpoly_mul(&acc, &[LaurentPoly2::monomial(1, 1 - t as i32 + 2 * k, 0), LaurentPoly2::one()])
    });
    if lhs != rhs {
        return false;
    }
    if t == 0 {
        return true;
    }
    let alt = (0..=t).fold(LaurentPoly2::zero(), |acc, m| {
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let term = qbinom(t, m).shift(m as i32 * (1 - t as i32), 0).scale(sign);
        &acc + &term
    });
    alt.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(qnum(2).to_string(), "q + q^-1");
        assert_eq!(qnum(0), LaurentPoly2::zero());
        assert_eq!(qfact(3), &qnum(3) * &qnum(2));
        assert_eq!(qbinom(2, 1), qnum(2));
        assert_eq!(qbinom(5, 0), LaurentPoly2::one());
        assert_eq!(qbinom(3, 4), LaurentPoly2::zero());
    }

    #[test]
    fn pascal_rule() {
        for t in 0..8u32 {
            for m in 1..=t + 1 {
                let lhs = qbinom(t + 1, m);
                let rhs = &qbinom(t, m).shift(m as i32, 0) + &qbinom(t, m - 1).shift(m as i32 - t as i32 - 1, 0);
                assert_eq!(lhs, rhs, "t = {t}, m = {m}");
            }
        }
    }
}
