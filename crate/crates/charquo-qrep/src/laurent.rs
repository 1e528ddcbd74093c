//! Laurent polynomials in `q, s` with integer coefficients, and fractions of them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::QrepError;

/// A monomial `c q^eq s^es`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub eq: i32,
    pub es: i32,
    pub c: i128,
}

/// Sparse Laurent polynomial in `q, s`. Terms are sorted by `(eq, es)` and
/// carry no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly2 {
    terms: Vec<Term>,
}

fn overflow() -> ! {
    panic!("Laurent coefficient overflow (exceeds i128)")
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        LaurentPoly2 { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i128) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: i128, eq: i32, es: i32) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            LaurentPoly2 {
                terms: vec![Term { eq, es, c }],
            }
        }
    }

    pub fn q() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn s() -> Self {
        Self::monomial(1, 0, 1)
    }

    /// Collects terms, merging equal exponents and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        let mut terms: Vec<Term> = iter.into_iter().filter(|t| t.c != 0).collect();
        terms.sort_unstable_by_key(|t| (t.eq, t.es));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.eq == t.eq && last.es == t.es => {
                    last.c = last.c.checked_add(t.c).unwrap_or_else(|| overflow());
                    if last.c == 0 {
                        out.pop();
                    }
                }
                _ => out.push(t),
            }
        }
        LaurentPoly2 { terms: out }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms == [Term { eq: 0, es: 0, c: 1 }]
    }

    /// Units of the Laurent ring are `±q^a s^b`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].c.abs() == 1
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let t = self.terms[0];
        Some(Self::monomial(t.c, -t.eq, -t.es))
    }

    pub fn shift(&self, dq: i32, ds: i32) -> Self {
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    eq: t.eq + dq,
                    es: t.es + ds,
                    c: t.c,
                })
                .collect(),
        }
    }

    pub fn scale(&self, k: i128) -> Self {
        if k == 0 {
            return Self::zero();
        }
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    c: t.c.checked_mul(k).unwrap_or_else(|| overflow()),
                    ..*t
                })
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// The ring involution `q -> q^{-1}, s -> s^{-1}`.
    pub fn bar(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|t| Term {
            eq: -t.eq,
            es: -t.es,
            c: t.c,
        }))
    }

    /// Positive integer gcd of the coefficients and the minimal exponents.
    pub fn content(&self) -> (i128, i32, i32) {
        let g = self.terms.iter().fold(0, |g, t| gcd(g, t.c));
        let mq = self.terms.iter().map(|t| t.eq).min().unwrap_or(0);
        let ms = self.terms.iter().map(|t| t.es).min().unwrap_or(0);
        (g, mq, ms)
    }

    fn divide_integer(&self, g: i128) -> Self {
        LaurentPoly2 {
            terms: self.terms.iter().map(|t| Term { c: t.c / g, ..*t }).collect(),
        }
    }

    /// Largest term in the order `(eq, es)`.
    pub fn leading(&self) -> Option<Term> {
        self.terms.last().copied()
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentPoly2) -> Option<LaurentPoly2> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.is_monomial() {
            let t = d.terms[0];
            if self.terms.iter().any(|x| x.c % t.c != 0) {
                return None;
            }
            return Some(LaurentPoly2 {
                terms: self
                    .terms
                    .iter()
                    .map(|x| Term {
                        eq: x.eq - t.eq,
                        es: x.es - t.es,
                        c: x.c / t.c,
                    })
                    .collect(),
            });
        }
        let lead = d.leading().unwrap();
        // An exact quotient has lowest degrees min(f) - min(d) in each variable.
        let (_, fq, fs) = self.content();
        let (_, dq, ds) = d.content();
        let (q_floor, s_floor) = (fq - dq, fs - ds);
        let mut rem = self.clone();
        let mut quot: Vec<Term> = Vec::new();
        while let Some(r) = rem.leading() {
            if r.c % lead.c != 0 {
                return None;
            }
            let t = Term {
                eq: r.eq - lead.eq,
                es: r.es - lead.es,
                c: r.c / lead.c,
            };
            if t.eq < q_floor || t.es < s_floor {
                return None;
            }
            quot.push(t);
            rem = &rem - &d.shift(t.eq, t.es).scale(t.c);
        }
        Some(Self::from_terms(quot))
    }

    /// Evaluation at `(q0, s0)` modulo a prime `r`. Both must be invertible.
    pub fn eval_mod(&self, r: u64, q0: u64, s0: u64) -> Result<u64, QrepError> {
        let q0 = q0 % r;
        let s0 = s0 % r;
        if q0 == 0 || s0 == 0 {
            return Err(QrepError::BadPoint("q0 and s0 must be invertible".into()));
        }
        let qi = inv_mod(q0, r);
        let si = inv_mod(s0, r);
        let mut acc: u128 = 0;
        let rr = r as u128;
        for t in &self.terms {
            let qv = if t.eq >= 0 { pow_mod(q0, t.eq as u64, r) } else { pow_mod(qi, (-t.eq) as u64, r) };
            let sv = if t.es >= 0 { pow_mod(s0, t.es as u64, r) } else { pow_mod(si, (-t.es) as u64, r) };
            let c = t.c.rem_euclid(r as i128) as u128;
            acc = (acc + c * (qv as u128 * sv as u128 % rr)) % rr;
        }
        Ok(acc as u64)
    }

    /// `[c, eq, es]` triples.
    pub fn to_triples(&self) -> Vec<[i128; 3]> {
        self.terms.iter().map(|t| [t.c, t.eq as i128, t.es as i128]).collect()
    }

    pub fn from_triples(v: &[[i128; 3]]) -> Result<Self, QrepError> {
        let mut terms = Vec::with_capacity(v.len());
        for &[c, eq, es] in v {
            let eq = i32::try_from(eq).map_err(|_| QrepError::Parse(format!("q exponent {eq} out of range")))?;
            let es = i32::try_from(es).map_err(|_| QrepError::Parse(format!("s exponent {es} out of range")))?;
            terms.push(Term { eq, es, c });
        }
        let mut sum = Vec::with_capacity(terms.len());
        // from_terms panics on overflow; untrusted input is summed with checks.
        terms.sort_unstable_by_key(|t| (t.eq, t.es));
        for t in terms {
            match sum.last_mut() {
                Some(Term { eq, es, c }) if *eq == t.eq && *es == t.es => {
                    *c = c
                        .checked_add(t.c)
                        .ok_or_else(|| QrepError::Parse("coefficient overflow".into()))?;
                }
                _ => sum.push(t),
            }
        }
        Ok(Self::from_terms(sum))
    }
}

pub(crate) fn pow_mod(b: u64, mut e: u64, r: u64) -> u64 {
    let rr = r as u128;
    let mut acc = 1u128 % rr;
    let mut base = b as u128 % rr;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % rr;
        }
        base = base * base % rr;
        e >>= 1;
    }
    acc as u64
}

pub(crate) fn inv_mod(a: u64, r: u64) -> u64 {
    pow_mod(a, r - 2, r)
}

impl Add for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(self, o: &LaurentPoly2) -> LaurentPoly2 {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match (a[i].eq, a[i].es).cmp(&(b[j].eq, b[j].es)) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a[i].c.checked_add(b[j].c).unwrap_or_else(|| overflow());
                    if c != 0 {
                        out.push(Term { c, ..a[i] });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        LaurentPoly2 { terms: out }
    }
}

impl Neg for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn neg(self) -> LaurentPoly2 {
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    c: t.c.checked_neg().unwrap_or_else(|| overflow()),
                    ..*t
                })
                .collect(),
        }
    }
}

impl Sub for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(self, o: &LaurentPoly2) -> LaurentPoly2 {
        self + &(-o)
    }
}

impl Mul for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn mul(self, o: &LaurentPoly2) -> LaurentPoly2 {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly2::zero();
        }
        if o.is_monomial() {
            let t = o.terms[0];
            return self.shift(t.eq, t.es).scale(t.c);
        }
        if self.is_monomial() {
            return o * self;
        }
        let mut prods = Vec::with_capacity(self.terms.len() * o.terms.len());
        for a in &self.terms {
            for b in &o.terms {
                prods.push(Term {
                    eq: a.eq + b.eq,
                    es: a.es + b.es,
                    c: a.c.checked_mul(b.c).unwrap_or_else(|| overflow()),
                });
            }
        }
        LaurentPoly2::from_terms(prods)
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

owned_ops!(LaurentPoly2);
owned_ops!(RationalFn2);

fn fmt_var(f: &mut fmt::Formatter<'_>, name: &str, e: i32, first: &mut bool) -> fmt::Result {
    if e == 0 {
        return Ok(());
    }
    if !*first {
        write!(f, "*")?;
    }
    *first = false;
    if e == 1 {
        write!(f, "{name}")
    } else {
        write!(f, "{name}^{e}")
    }
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().rev().enumerate() {
            let c = if i == 0 {
                if t.c < 0 {
                    write!(f, "-")?;
                }
                t.c.abs()
            } else {
                write!(f, " {} ", if t.c < 0 { '-' } else { '+' })?;
                t.c.abs()
            };
            let mono = t.eq != 0 || t.es != 0;
            let mut first = true;
            if c != 1 || !mono {
                write!(f, "{c}")?;
                first = false;
            }
            fmt_var(f, "q", t.eq, &mut first)?;
            fmt_var(f, "s", t.es, &mut first)?;
        }
        Ok(())
    }
}

/// A fraction `num / den` of Laurent polynomials, reduced by integer and
/// monomial content. Equality is by cross-multiplication.
#[derive(Debug, Clone)]
pub struct RationalFn2 {
    num: LaurentPoly2,
    den: LaurentPoly2,
}

impl PartialEq for RationalFn2 {
    fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl Eq for RationalFn2 {}

impl From<LaurentPoly2> for RationalFn2 {
    fn from(p: LaurentPoly2) -> Self {
        RationalFn2 {
            num: p,
            den: LaurentPoly2::one(),
        }
    }
}

impl RationalFn2 {
    pub fn new(num: LaurentPoly2, den: LaurentPoly2) -> Result<Self, QrepError> {
        if den.is_zero() {
            return Err(QrepError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: LaurentPoly2, den: LaurentPoly2) -> Self {
        if num.is_zero() {
            return Self::from(LaurentPoly2::zero());
        }
        if let Some(q) = num.div_exact(&den) {
            return Self::from(q);
        }
        let (gn, nq, ns) = num.content();
        let (gd, dq, ds) = den.content();
        let g = gcd(gn, gd);
        let sign = if den.leading().unwrap().c < 0 { -1 } else { 1 };
        let (mq, ms) = (nq.min(dq), ns.min(ds));
        RationalFn2 {
            num: num.divide_integer(g * sign).shift(-mq, -ms),
            den: den.divide_integer(g * sign).shift(-mq, -ms),
        }
    }

    pub fn zero() -> Self {
        Self::from(LaurentPoly2::zero())
    }

    pub fn one() -> Self {
        Self::from(LaurentPoly2::one())
    }

    pub fn num(&self) -> &LaurentPoly2 {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value as a Laurent polynomial, when the denominator divides.
    pub fn as_laurent(&self) -> Option<LaurentPoly2> {
        self.num.div_exact(&self.den)
    }

    pub fn inv(&self) -> Result<Self, QrepError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn bar(&self) -> Self {
        Self::reduce(self.num.bar(), self.den.bar())
    }

    /// Evaluation modulo `r`; fails when the denominator vanishes there.
    pub fn eval_mod(&self, r: u64, q0: u64, s0: u64) -> Result<u64, QrepError> {
        let d = self.den.eval_mod(r, q0, s0)?;
        if d == 0 {
            return Err(QrepError::BadPoint(format!("denominator {} vanishes", self.den)));
        }
        let n = self.num.eval_mod(r, q0, s0)?;
        Ok((n as u128 * inv_mod(d, r) as u128 % r as u128) as u64)
    }
}

impl Add for &RationalFn2 {
    type Output = RationalFn2;
    fn add(self, o: &RationalFn2) -> RationalFn2 {
        if self.den == o.den {
            return RationalFn2::reduce(&self.num + &o.num, self.den.clone());
        }
        RationalFn2::reduce(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Neg for &RationalFn2 {
    type Output = RationalFn2;
    fn neg(self) -> RationalFn2 {
        RationalFn2 {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RationalFn2 {
    type Output = RationalFn2;
    fn sub(self, o: &RationalFn2) -> RationalFn2 {
        self + &(-o)
    }
}

impl Mul for &RationalFn2 {
    type Output = RationalFn2;
    fn mul(self, o: &RationalFn2) -> RationalFn2 {
        RationalFn2::reduce(&self.num * &o.num, &self.den * &o.den)
    }
}

impl fmt::Display for RationalFn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
