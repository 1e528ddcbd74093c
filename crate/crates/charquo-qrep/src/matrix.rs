//! Dense matrices over the Laurent ring, exact kernels, and matrices mod a prime.

use std::ops::{Index, IndexMut};

use crate::laurent::{inv_mod, LaurentPoly2, Term};
use crate::QrepError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LMatrix {
    rows: usize,
    cols: usize,
    data: Vec<LaurentPoly2>,
}

impl Index<(usize, usize)> for LMatrix {
    type Output = LaurentPoly2;
    fn index(&self, (r, c): (usize, usize)) -> &LaurentPoly2 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for LMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut LaurentPoly2 {
        &mut self.data[r * self.cols + c]
    }
}

impl LMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LMatrix {
            rows,
            cols,
            data: vec![LaurentPoly2::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, LaurentPoly2::one())
    }

    pub fn scalar(n: usize, x: LaurentPoly2) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly2>>) -> Result<Self, QrepError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(QrepError::Shape("ragged rows".into()));
        }
        Ok(LMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[LaurentPoly2] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<LaurentPoly2>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<LaurentPoly2> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn select_rows(&self, idx: &[usize]) -> LMatrix {
        LMatrix {
            rows: idx.len(),
            cols: self.cols,
            data: idx.iter().flat_map(|&r| self.row(r).iter().cloned()).collect(),
        }
    }

    pub fn from_columns(rows: usize, cols: &[Vec<LaurentPoly2>]) -> LMatrix {
        let mut m = LMatrix::zeros(rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            for (r, x) in col.iter().enumerate() {
                m[(r, c)] = x.clone();
            }
        }
        m
    }

    pub fn mul(&self, o: &LMatrix) -> LMatrix {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = LMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn product<'a, I: IntoIterator<Item = &'a LMatrix>>(n: usize, it: I) -> LMatrix {
        it.into_iter().fold(LMatrix::identity(n), |acc, m| acc.mul(m))
    }

    pub fn pow(&self, k: u32) -> LMatrix {
        (0..k).fold(LMatrix::identity(self.rows), |acc, _| acc.mul(self))
    }

    pub fn transpose(&self) -> LMatrix {
        let mut out = LMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].clone();
            }
        }
        out
    }

    pub fn bar(&self) -> LMatrix {
        LMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.bar()).collect(),
        }
    }

    pub fn scale(&self, k: &LaurentPoly2) -> LMatrix {
        LMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn sub(&self, o: &LMatrix) -> LMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        LMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn trace(&self) -> LaurentPoly2 {
        (0..self.rows.min(self.cols)).fold(LaurentPoly2::zero(), |acc, i| &acc + &self[(i, i)])
    }

    /// The scalar `λ` when the matrix is `λ·I`.
    pub fn as_scalar(&self) -> Option<LaurentPoly2> {
        if !self.is_square() {
            return None;
        }
        let lam = if self.rows == 0 { LaurentPoly2::zero() } else { self[(0, 0)].clone() };
        for r in 0..self.rows {
            for c in 0..self.cols {
                let want = if r == c { &lam } else { &LaurentPoly2::zero() };
                if &self[(r, c)] != want {
                    return None;
                }
            }
        }
        Some(lam)
    }

    /// Whether `self = λ·o` for some nonzero `λ` in the fraction field.
    pub fn proportional(&self, o: &LMatrix) -> bool {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return false;
        }
        let Some(k) = self.data.iter().position(|x| !x.is_zero()) else {
            return o.is_zero();
        };
        let (a0, b0) = (&self.data[k], &o.data[k]);
        if b0.is_zero() {
            return false;
        }
        self.data.iter().zip(&o.data).all(|(a, b)| a * b0 == b * a0)
    }

    /// Divides every entry by the common integer and monomial content, and
    /// makes the first nonzero entry's leading coefficient positive.
    pub fn normalize(&self) -> LMatrix {
        let mut v = self.data.clone();
        strip_content(&mut v);
        LMatrix {
            rows: self.rows,
            cols: self.cols,
            data: v,
        }
    }

    pub fn eval_mod(&self, r: u64, q0: u64, s0: u64) -> Result<ModMatrix, QrepError> {
        let mut data = Vec::with_capacity(self.data.len());
        for x in &self.data {
            data.push(x.eval_mod(r, q0, s0)?);
        }
        Ok(ModMatrix {
            r,
            n: self.rows,
            m: self.cols,
            data,
        })
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Removes common integer and monomial factors from a vector of entries.
pub fn strip_content(v: &mut [LaurentPoly2]) {
    let mut g = 0i128;
    let mut mq = i32::MAX;
    let mut ms = i32::MAX;
    for x in v.iter() {
        for t in x.terms() {
            g = gcd(g, t.c);
            mq = mq.min(t.eq);
            ms = ms.min(t.es);
        }
    }
    if g == 0 {
        return;
    }
    let lead_sign = v
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.leading().unwrap().c.signum())
        .unwrap_or(1);
    let g = g * lead_sign;
    for x in v.iter_mut() {
        if !x.is_zero() {
            *x = LaurentPoly2::from_terms(x.terms().iter().map(|t| Term {
                eq: t.eq - mq,
                es: t.es - ms,
                c: t.c / g,
            }));
        }
    }
}

/// Kernel of `m` over the fraction field, as vectors with Laurent entries.
///
/// Gauss-Jordan elimination without division: unit pivots are preferred, and
/// other pivots cross-multiply, after which each row is stripped of content.
pub fn kernel(m: &LMatrix) -> Vec<Vec<LaurentPoly2>> {
    let (nr, nc) = (m.rows, m.cols);
    let mut rows: Vec<Vec<LaurentPoly2>> = m.to_rows();
    let mut row_used = vec![false; nr];
    let mut col_pivot: Vec<Option<usize>> = vec![None; nc];
    loop {
        let mut best: Option<(usize, usize, (bool, usize))> = None;
        for (r, row) in rows.iter().enumerate() {
            if row_used[r] {
                continue;
            }
            for (c, x) in row.iter().enumerate() {
                if x.is_zero() || col_pivot[c].is_some() {
                    continue;
                }
                let rank = (!x.is_unit(), x.len());
                if best.as_ref().map_or(true, |b| rank < b.2) {
                    best = Some((r, c, rank));
                }
            }
        }
        let Some((pr, pc, _)) = best else { break };
        row_used[pr] = true;
        col_pivot[pc] = Some(pr);
        let prow = rows[pr].clone();
        let piv = prow[pc].clone();
        let inv = piv.unit_inverse();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == pr || row[pc].is_zero() {
                continue;
            }
            let a = row[pc].clone();
            match &inv {
                Some(u) => {
                    let f = &a * u;
                    for (x, p) in row.iter_mut().zip(&prow) {
                        if !p.is_zero() {
                            *x = &*x - &(&f * p);
                        }
                    }
                }
                None => {
                    for (x, p) in row.iter_mut().zip(&prow) {
                        *x = &(&*x * &piv) - &(&a * p);
                    }
                }
            }
            debug_assert!(row[pc].is_zero());
            strip_content(row);
        }
    }
    let free: Vec<usize> = (0..nc).filter(|&c| col_pivot[c].is_none()).collect();
    let pivots: Vec<(usize, usize)> = (0..nc).filter_map(|c| col_pivot[c].map(|r| (c, r))).collect();
    let common = pivots.iter().fold(LaurentPoly2::one(), |acc, &(c, r)| {
        let p = &rows[r][c];
        if p.is_unit() || acc.div_exact(p).is_some() {
            acc
        } else {
            &acc * p
        }
    });
    free.iter()
        .map(|&f| {
            let mut v = vec![LaurentPoly2::zero(); nc];
            v[f] = common.clone();
            for &(c, r) in &pivots {
                let a = &rows[r][f];
                if a.is_zero() {
                    continue;
                }
                let num = &(-a) * &common;
                v[c] = num.div_exact(&rows[r][c]).expect("pivot divides the common multiple");
            }
            strip_content(&mut v);
            v
        })
        .collect()
}

/// Rank over the fraction field.
pub fn rank(m: &LMatrix) -> usize {
    m.cols - kernel(m).len()
}

/// A matrix over `F_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    pub r: u64,
    pub n: usize,
    pub m: usize,
    pub data: Vec<u64>,
}

impl ModMatrix {
    pub fn identity(r: u64, n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1 % r;
        }
        ModMatrix { r, n, m: n, data }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.m + j]
    }

    pub fn mul(&self, o: &ModMatrix) -> ModMatrix {
        assert_eq!(self.m, o.n);
        let r = self.r as u128;
        let mut data = vec![0u64; self.n * o.m];
        for i in 0..self.n {
            for j in 0..o.m {
                let mut acc = 0u128;
                for k in 0..self.m {
                    acc = (acc + self.get(i, k) as u128 * o.get(k, j) as u128) % r;
                }
                data[i * o.m + j] = acc as u64;
            }
        }
        ModMatrix { r: self.r, n: self.n, m: o.m, data }
    }

    pub fn transpose(&self) -> ModMatrix {
        let mut data = vec![0; self.data.len()];
        for i in 0..self.n {
            for j in 0..self.m {
                data[j * self.n + i] = self.get(i, j);
            }
        }
        ModMatrix { r: self.r, n: self.m, m: self.n, data }
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<ModMatrix> {
        let n = self.n;
        if n != self.m {
            return None;
        }
        let r = self.r;
        let mut a = self.data.clone();
        let mut b = ModMatrix::identity(r, n).data;
        for col in 0..n {
            let piv = (col..n).find(|&i| a[i * n + col] != 0)?;
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
                b.swap(col * n + k, piv * n + k);
            }
            let inv = inv_mod(a[col * n + col], r) as u128;
            for k in 0..n {
                a[col * n + k] = (a[col * n + k] as u128 * inv % r as u128) as u64;
                b[col * n + k] = (b[col * n + k] as u128 * inv % r as u128) as u64;
            }
            for i in 0..n {
                if i == col || a[i * n + col] == 0 {
                    continue;
                }
                let f = a[i * n + col] as u128;
                for k in 0..n {
                    let sa = (f * a[col * n + k] as u128 % r as u128) as u64;
                    let sb = (f * b[col * n + k] as u128 % r as u128) as u64;
                    a[i * n + k] = (a[i * n + k] + r - sa) % r;
                    b[i * n + k] = (b[i * n + k] + r - sb) % r;
                }
            }
        }
        Some(ModMatrix { r, n, m: n, data: b })
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_some()
    }

    /// The scalar `λ` with `self = λ·I`, if any.
    pub fn as_scalar(&self) -> Option<u64> {
        if self.n != self.m || self.n == 0 {
            return None;
        }
        let lam = self.get(0, 0);
        for i in 0..self.n {
            for j in 0..self.m {
                if self.get(i, j) != if i == j { lam } else { 0 } {
                    return None;
                }
            }
        }
        Some(lam)
    }

    /// Whether `self = λ·o` for some nonzero `λ`.
    pub fn projectively_equal(&self, o: &ModMatrix) -> bool {
        if (self.n, self.m) != (o.n, o.m) {
            return false;
        }
        let Some(k) = self.data.iter().position(|&x| x != 0) else {
            return false;
        };
        if o.data[k] == 0 {
            return false;
        }
        let r = self.r as u128;
        let (a0, b0) = (self.data[k] as u128, o.data[k] as u128);
        self.data
            .iter()
            .zip(&o.data)
            .all(|(&a, &b)| a as u128 * b0 % r == b as u128 * a0 % r)
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.n).map(|i| self.data[i * self.m..(i + 1) * self.m].to_vec()).collect()
    }
}
