//! Arithmetic in F_p and in SL2, PSL2 and PGL2 over F_p.
//!
//! Scalars are `u32` representatives in `[0, p)`. Matrices are row-major
//! `[m11, m12, m21, m22]`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not an odd prime in [5, 2^32)")]
    BadModulus(u64),
    #[error("{0:?} element has no torus centralizer")]
    NoTorus(ElementClass),
    #[error("element is {0:?}, expected a non-identity non-involution")]
    NotMaximalCandidate(ElementClass),
    #[error("not conjugate")]
    NotConjugate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(5..1 << 32).contains(&p) || !arith::is_prime(p) {
            return Err(FieldError::BadModulus(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    /// Representative in `(-p/2, p/2]`.
    pub fn signed(&self, a: u32) -> i64 {
        let a = a as i64;
        if a > (self.p as i64) / 2 {
            a - self.p as i64
        } else {
            a
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (if s >= self.p { s - self.p } else { s }) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            (self.p - a as u64) as u32
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    /// Legendre symbol by Euler's criterion: 0, 1 or -1.
    pub fn legendre(&self, a: u32) -> i8 {
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_nonzero_square(&self, a: u32) -> bool {
        self.legendre(a) == 1
    }

    pub fn least_nonresidue(&self) -> u32 {
        (2..).find(|&a| self.legendre(a) == -1).unwrap()
    }

    /// Tonelli–Shanks square root.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let p = self.p;
        if p % 4 == 3 {
            return Some(self.pow(a, (p + 1) / 4));
        }
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let z = self.least_nonresidue();
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    pub fn mat(&self, m11: i64, m12: i64, m21: i64, m22: i64) -> Mat2 {
        Mat2([
            self.reduce(m11),
            self.reduce(m12),
            self.reduce(m21),
            self.reduce(m22),
        ])
    }

    #[inline]
    pub fn mat_mul(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        let p = self.p;
        let [a0, a1, a2, a3] = a.0.map(|x| x as u64);
        let [b0, b1, b2, b3] = b.0.map(|x| x as u64);
        Mat2([
            ((a0 * b0 + a1 * b2) % p) as u32,
            ((a0 * b1 + a1 * b3) % p) as u32,
            ((a2 * b0 + a3 * b2) % p) as u32,
            ((a2 * b1 + a3 * b3) % p) as u32,
        ])
    }

    #[inline]
    pub fn trace(&self, a: &Mat2) -> u32 {
        self.add(a.0[0], a.0[3])
    }

    /// Trace of a product without forming it.
    #[inline]
    pub fn trace_mul(&self, a: &Mat2, b: &Mat2) -> u32 {
        let [a0, a1, a2, a3] = a.0.map(|x| x as u64);
        let [b0, b1, b2, b3] = b.0.map(|x| x as u64);
        ((a0 * b0 + a1 * b2 + a2 * b1 + a3 * b3) % self.p) as u32
    }

    pub fn det(&self, a: &Mat2) -> u32 {
        self.sub(self.mul(a.0[0], a.0[3]), self.mul(a.0[1], a.0[2]))
    }

    /// Adjugate; the inverse for determinant-one matrices.
    #[inline]
    pub fn adj(&self, a: &Mat2) -> Mat2 {
        Mat2([a.0[3], self.neg(a.0[1]), self.neg(a.0[2]), a.0[0]])
    }

    pub fn mat_inv(&self, a: &Mat2) -> Option<Mat2> {
        let d = self.inv(self.det(a))?;
        Some(self.scale(&self.adj(a), d))
    }

    pub fn scale(&self, a: &Mat2, c: u32) -> Mat2 {
        Mat2(a.0.map(|x| self.mul(x, c)))
    }

    pub fn mat_neg(&self, a: &Mat2) -> Mat2 {
        Mat2(a.0.map(|x| self.neg(x)))
    }

    pub fn mat_pow(&self, a: &Mat2, mut e: u64) -> Mat2 {
        let mut base = *a;
        let mut acc = Mat2::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mat_mul(&acc, &base);
            }
            base = self.mat_mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Canonical sign: first nonzero entry in row-major order lies in `[1, (p-1)/2]`.
    #[inline]
    pub fn proj(&self, a: Mat2) -> ProjMat2 {
        let half = ((self.p - 1) / 2) as u32;
        let lead = a.0.iter().copied().find(|&x| x != 0).unwrap_or(0);
        if lead > half {
            ProjMat2(self.mat_neg(&a))
        } else {
            ProjMat2(a)
        }
    }

    #[inline]
    pub fn proj_mul(&self, a: &ProjMat2, b: &ProjMat2) -> ProjMat2 {
        self.proj(self.mat_mul(&a.0, &b.0))
    }

    #[inline]
    pub fn proj_inv(&self, a: &ProjMat2) -> ProjMat2 {
        self.proj(self.adj(&a.0))
    }

    pub fn proj_pow(&self, a: &ProjMat2, e: u64) -> ProjMat2 {
        self.proj(self.mat_pow(&a.0, e))
    }

    pub fn is_proj_identity(&self, a: &ProjMat2) -> bool {
        a.0 == Mat2::IDENTITY
    }

    pub fn classify(&self, m: &ProjMat2) -> ElementClass {
        if self.is_proj_identity(m) {
            return ElementClass::Identity;
        }
        let t = self.trace(&m.0);
        if t == 0 {
            return ElementClass::Involution;
        }
        let disc = self.sub(self.mul(t, t), 4);
        match self.legendre(disc) {
            0 => ElementClass::Unipotent,
            1 => ElementClass::Split,
            _ => ElementClass::NonSplit,
        }
    }

    /// Order of the cyclic centralizer in PSL2 of an element of the given class.
    pub fn centralizer_order(&self, class: ElementClass) -> u64 {
        match class {
            ElementClass::Identity => 1,
            ElementClass::Involution => 2,
            ElementClass::Unipotent => self.p,
            ElementClass::Split => (self.p - 1) / 2,
            ElementClass::NonSplit => self.p.div_ceil(2),
        }
    }

    pub fn order(&self, m: &ProjMat2) -> u64 {
        let mut n = self.centralizer_order(self.classify(m));
        for (q, _) in arith::factorize(n) {
            while n % q == 0 && self.is_proj_identity(&self.proj_pow(m, n / q)) {
                n /= q;
            }
        }
        n
    }

    pub fn is_maximal(&self, m: &ProjMat2) -> Result<bool, FieldError> {
        let class = self.classify(m);
        if matches!(class, ElementClass::Identity | ElementClass::Involution) {
            return Err(FieldError::NotMaximalCandidate(class));
        }
        Ok(self.order(m) == self.centralizer_order(class))
    }

    /// Rescale an invertible matrix so that its determinant is 1 or the least non-residue.
    pub fn pgl_normalize(&self, m: &Mat2) -> PglElem {
        let d = self.det(m);
        assert!(d != 0, "singular matrix has no PGL class");
        let nu = self.least_nonresidue();
        let (c, square_det) = if self.is_nonzero_square(d) {
            (self.inv(self.sqrt(d).unwrap()).unwrap(), true)
        } else {
            (self.sqrt(self.mul(nu, self.inv(d).unwrap())).unwrap(), false)
        };
        let scaled = self.scale(m, c);
        PglElem {
            m: self.proj(scaled).0,
            square_det,
        }
    }

    pub fn pgl_identity(&self) -> PglElem {
        PglElem {
            m: Mat2::IDENTITY,
            square_det: true,
        }
    }

    pub fn pgl_mul(&self, g: &PglElem, h: &PglElem) -> PglElem {
        let mut m = self.mat_mul(&g.m, &h.m);
        if !g.square_det && !h.square_det {
            let nu_inv = self.inv(self.least_nonresidue()).unwrap();
            m = self.scale(&m, nu_inv);
        }
        PglElem {
            m: self.proj(m).0,
            square_det: g.square_det == h.square_det,
        }
    }

    pub fn pgl_inv(&self, g: &PglElem) -> PglElem {
        // adj(g) is a scalar multiple of g^{-1} with the same determinant.
        PglElem {
            m: self.proj(self.adj(&g.m)).0,
            square_det: g.square_det,
        }
    }

    /// `g x g^{-1}` for `x` of determinant one.
    pub fn conj(&self, g: &PglElem, x: &Mat2) -> Mat2 {
        let y = self.mat_mul(&self.mat_mul(&g.m, x), &self.adj(&g.m));
        let d = self.det(&g.m);
        if d == 1 {
            y
        } else {
            self.scale(&y, self.inv(d).unwrap())
        }
    }

    /// `g a h` for `g`, `h` of equal determinant class; the result has determinant one.
    #[inline]
    pub fn twist(&self, g: &PglElem, a: &Mat2, h: &PglElem) -> ProjMat2 {
        debug_assert_eq!(g.square_det, h.square_det);
        let m = self.mat_mul(&self.mat_mul(&g.m, a), &h.m);
        if g.square_det {
            self.proj(m)
        } else {
            let nu_inv = self.inv(self.det(&g.m)).unwrap();
            self.proj(self.scale(&m, nu_inv))
        }
    }

    /// The torus centralizing a split or non-split element in PGL2.
    ///
    /// Every invertible matrix commuting with a non-scalar `M` lies in `F_p[M]`,
    /// so up to scalars the centralizer is `{1} ∪ {a + M : det(a + M) ≠ 0}`.
    pub fn centralizer_pgl(&self, m: &ProjMat2) -> Result<Vec<PglElem>, FieldError> {
        let class = self.classify(m);
        if !matches!(class, ElementClass::Split | ElementClass::NonSplit) {
            return Err(FieldError::NoTorus(class));
        }
        let t = self.trace(&m.0);
        let mut out = vec![self.pgl_identity()];
        for a in 0..self.p as u32 {
            let d = self.add(self.mul(a, self.add(a, t)), 1);
            if d == 0 {
                continue;
            }
            let g = Mat2([
                self.add(m.0 .0[0], a),
                m.0 .0[1],
                m.0 .0[2],
                self.add(m.0 .0[3], a),
            ]);
            out.push(self.pgl_normalize(&g));
        }
        out.sort();
        Ok(out)
    }

    /// A `g` in PGL2 with `g M g^{-1} = N` in PSL2.
    ///
    /// The solutions form a coset of a torus; the identity is preferred, then
    /// determinant-one representatives, then the least matrix.
    pub fn conjugator(&self, m: &ProjMat2, n: &ProjMat2) -> Result<PglElem, FieldError> {
        let tm = self.trace(&m.0);
        let tn = self.trace(&n.0);
        let target = if tn == tm {
            n.0
        } else if tn == self.neg(tm) {
            self.mat_neg(&n.0)
        } else {
            return Err(FieldError::NotConjugate);
        };
        if m.0 == Mat2::IDENTITY || target == Mat2::IDENTITY {
            return if m.0 == target {
                Ok(self.pgl_identity())
            } else {
                Err(FieldError::NotConjugate)
            };
        }
        let basis = self.nullspace4(self.conjugator_rows(&m.0, &target));
        let mut best: Option<PglElem> = None;
        let mut consider = |g: Mat2| {
            if self.det(&g) == 0 {
                return;
            }
            let e = self.pgl_normalize(&g);
            let rank = |x: &PglElem| (x.m != Mat2::IDENTITY, !x.square_det, x.m);
            if best.as_ref().map_or(true, |b| rank(&e) < rank(b)) {
                best = Some(e);
            }
        };
        match basis.len() {
            0 => {}
            1 => consider(Mat2(basis[0])),
            _ => {
                consider(Mat2(basis[1]));
                for k in 0..self.p as u32 {
                    let mut v = [0u32; 4];
                    for i in 0..4 {
                        v[i] = self.add(basis[0][i], self.mul(k, basis[1][i]));
                    }
                    consider(Mat2(v));
                }
            }
        }
        best.ok_or(FieldError::NotConjugate)
    }

    /// Some conjugator, without the canonical choice made by [`PrimeField::conjugator`].
    pub fn conjugator_any(&self, m: &ProjMat2, n: &ProjMat2) -> Result<PglElem, FieldError> {
        let tm = self.trace(&m.0);
        let tn = self.trace(&n.0);
        let target = if tn == tm {
            n.0
        } else if tn == self.neg(tm) {
            self.mat_neg(&n.0)
        } else {
            return Err(FieldError::NotConjugate);
        };
        if m.0 == Mat2::IDENTITY || target == Mat2::IDENTITY {
            return self.conjugator(m, n);
        }
        let basis = self.nullspace4(self.conjugator_rows(&m.0, &target));
        let mut combos = basis.iter().map(|b| Mat2(*b)).collect::<Vec<_>>();
        if basis.len() == 2 {
            for k in 1..4u32 {
                let mut v = [0u32; 4];
                for i in 0..4 {
                    v[i] = self.add(basis[0][i], self.mul(k, basis[1][i]));
                }
                combos.push(Mat2(v));
            }
        }
        combos
            .into_iter()
            .find(|g| self.det(g) != 0)
            .map(|g| self.pgl_normalize(&g))
            .ok_or(FieldError::NotConjugate)
    }

    /// Rows of the linear system `gM - Ng = 0` in the entries of `g`.
    fn conjugator_rows(&self, m: &Mat2, n: &Mat2) -> [[u32; 4]; 4] {
        let [m0, m1, m2, m3] = m.0;
        let [n0, n1, n2, n3] = n.0;
        let z = |x: u32| self.neg(x);
        [
            [self.sub(m0, n0), m2, z(n1), 0],
            [m1, self.sub(m3, n0), 0, z(n1)],
            [z(n2), 0, self.sub(m0, n3), m2],
            [0, z(n2), m1, self.sub(m3, n3)],
        ]
    }

    fn nullspace4(&self, mut rows: [[u32; 4]; 4]) -> Vec<[u32; 4]> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..4 {
            let Some(pr) = (r..4).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = self.inv(rows[r][c]).unwrap();
            for j in 0..4 {
                rows[r][j] = self.mul(rows[r][j], inv);
            }
            for i in 0..4 {
                if i != r && rows[i][c] != 0 {
                    let f = rows[i][c];
                    for j in 0..4 {
                        rows[i][j] = self.sub(rows[i][j], self.mul(f, rows[r][j]));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..4).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = [0u32; 4];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = self.neg(rows[i][fc]);
                }
                v
            })
            .collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2(pub [u32; 4]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([1, 0, 0, 1]);
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// An element of PSL2 stored as its sign-canonical determinant-one lift.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ProjMat2(pub Mat2);

impl ProjMat2 {
    pub const IDENTITY: ProjMat2 = ProjMat2(Mat2::IDENTITY);

    pub fn lift(&self) -> &Mat2 {
        &self.0
    }
}

/// A PGL2 element scaled to determinant 1 (square class) or the least non-residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PglElem {
    pub m: Mat2,
    pub square_det: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ElementClass {
    Identity,
    Involution,
    Unipotent,
    Split,
    NonSplit,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rejects_bad_moduli() {
        for p in [0, 1, 2, 3, 4, 9, 15, 1 << 32] {
            assert!(PrimeField::new(p).is_err(), "{p}");
        }
    }

    #[test]
    fn sqrt_all_residues() {
        for p in [5u64, 13, 17, 19, 31, 41, 97, 257, 1009] {
            let f = f(p);
            for a in 0..p as u32 {
                match f.sqrt(a) {
                    Some(r) => assert_eq!(f.mul(r, r), a),
                    None => assert_eq!(f.legendre(a), -1),
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let f = f(31);
        assert_eq!(f.classify(&ProjMat2::IDENTITY), ElementClass::Identity);
        assert_eq!(f.classify(&f.proj(f.mat(1, 1, 0, 1))), ElementClass::Unipotent);
        assert_eq!(f.classify(&f.proj(f.mat(0, 1, -1, 0))), ElementClass::Involution);
        // trace 3: 3^2 - 4 = 5 is a square mod 31
        assert_eq!(f.classify(&f.proj(f.mat(3, 1, -1, 0))), ElementClass::Split);
    }

    #[test]
    fn order_of_trace_three_mod_31() {
        let f = f(31);
        let m = f.proj(f.mat(3, 1, -1, 0));
        assert_eq!(f.order(&m), 15);
        assert!(f.is_maximal(&m).unwrap());
        let sq = f.proj_mul(&m, &m);
        assert_eq!(f.order(&sq), 15);
        let cube = f.proj_mul(&sq, &m);
        assert_eq!(f.order(&cube), 5);
        assert!(!f.is_maximal(&cube).unwrap());
    }

    #[test]
    fn maximal_rejects_identity_and_involution() {
        let f = f(19);
        assert!(f.is_maximal(&ProjMat2::IDENTITY).is_err());
        assert!(f.is_maximal(&f.proj(f.mat(0, 1, -1, 0))).is_err());
        assert!(f.is_maximal(&f.proj(f.mat(1, 0, 5, 1))).unwrap());
    }

    #[test]
    fn centralizer_sizes() {
        let f = f(19);
        // trace 3 splits mod 19 (5 = 9^2), trace 11 does not (117 = 3^2 * 13)
        let split = f.proj(f.mat(3, 1, -1, 0));
        let nonsplit = f.proj(f.mat(11, 1, -1, 0));
        let ts = f.centralizer_pgl(&split).unwrap();
        let tn = f.centralizer_pgl(&nonsplit).unwrap();
        assert_eq!(ts.len(), 18);
        assert_eq!(tn.len(), 20);
        for (t, m) in [(&ts, split), (&tn, nonsplit)] {
            let squares = t.iter().filter(|g| g.square_det).count();
            assert_eq!(squares * 2, t.len());
            for g in t {
                assert_eq!(f.proj(f.conj(g, &m.0)), m);
            }
        }
        assert!(f.centralizer_pgl(&ProjMat2::IDENTITY).is_err());
    }

    #[test]
    fn conjugator_examples() {
        let f = f(1009);
        let m = f.proj(f.mat(5, 0, 0, f.inv(5).unwrap() as i64));
        let n = f.proj_inv(&m);
        let g = f.conjugator(&m, &n).unwrap();
        assert_eq!(f.proj(f.conj(&g, &m.0)), n);
        assert_eq!(g.m, f.proj(f.mat(0, 1, -1, 0)).0);
        assert_eq!(f.conjugator(&m, &m).unwrap().m, Mat2::IDENTITY);
        let t3 = f.proj(f.mat(3, 1, -1, 0));
        let t5 = f.proj(f.mat(5, 1, -1, 0));
        assert_eq!(f.conjugator(&t3, &t5), Err(FieldError::NotConjugate));
    }

    #[test]
    fn pgl_group_laws() {
        let f = f(19);
        let m = f.proj(f.mat(11, 1, -1, 0));
        let t = f.centralizer_pgl(&m).unwrap();
        for g in &t {
            let gi = f.pgl_inv(g);
            assert_eq!(f.pgl_mul(g, &gi), f.pgl_identity());
            for h in &t {
                assert!(t.contains(&f.pgl_mul(g, h)));
            }
        }
    }
}
