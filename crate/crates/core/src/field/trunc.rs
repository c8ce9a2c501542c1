use super::{Fe, Field};
use crate::error::{Error, Result};

/// An element of `F_q[π]/(π^M)`: coefficients of `π^0 .. π^{M-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncElem {
    pub coeffs: Vec<Fe>,
}

impl TruncElem {
    pub fn level(&self) -> usize {
        self.coeffs.len()
    }

    /// Least index of a nonzero coefficient, or `M` for zero.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|&c| c != 0).unwrap_or(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.first().is_some_and(|&c| c != 0)
    }

    pub fn residue(&self) -> Fe {
        self.coeffs[0]
    }
}

/// The ring `F_q[π]/(π^M)` as an operation context.
#[derive(Clone, Debug)]
pub struct TruncRing {
    field: Field,
    level: usize,
}

impl TruncRing {
    pub fn new(field: Field, level: usize) -> Self {
        assert!(level >= 1, "truncation level must be positive");
        TruncRing { field, level }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn zero(&self) -> TruncElem {
        TruncElem { coeffs: vec![0; self.level] }
    }

    pub fn one(&self) -> TruncElem {
        self.constant(1)
    }

    pub fn constant(&self, c: Fe) -> TruncElem {
        let mut e = self.zero();
        e.coeffs[0] = c;
        e
    }

    /// `c·π^k`, zero when `k >= M`.
    pub fn monomial(&self, c: Fe, k: usize) -> TruncElem {
        let mut e = self.zero();
        if k < self.level {
            e.coeffs[k] = c;
        }
        e
    }

    pub fn from_coeffs(&self, coeffs: &[Fe]) -> TruncElem {
        let mut e = self.zero();
        for (i, &c) in coeffs.iter().enumerate().take(self.level) {
            e.coeffs[i] = c;
        }
        e
    }

    pub fn add(&self, a: &TruncElem, b: &TruncElem) -> TruncElem {
        let f = &self.field;
        TruncElem { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| f.add(x, y)).collect() }
    }

    pub fn sub(&self, a: &TruncElem, b: &TruncElem) -> TruncElem {
        let f = &self.field;
        TruncElem { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| f.sub(x, y)).collect() }
    }

    pub fn neg(&self, a: &TruncElem) -> TruncElem {
        TruncElem { coeffs: a.coeffs.iter().map(|&x| self.field.neg(x)).collect() }
    }

    pub fn mul(&self, a: &TruncElem, b: &TruncElem) -> TruncElem {
        let f = &self.field;
        let m = self.level;
        let mut out = vec![0; m];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate().take(m - i) {
                if y != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(x, y));
                }
            }
        }
        TruncElem { coeffs: out }
    }

    pub fn scale(&self, c: Fe, a: &TruncElem) -> TruncElem {
        TruncElem { coeffs: a.coeffs.iter().map(|&x| self.field.mul(c, x)).collect() }
    }

    /// Multiplication by `π^k`.
    pub fn shift_up(&self, a: &TruncElem, k: usize) -> TruncElem {
        let mut out = vec![0; self.level];
        for i in 0..self.level.saturating_sub(k) {
            out[i + k] = a.coeffs[i];
        }
        TruncElem { coeffs: out }
    }

    /// Exact division by `π^k` of an element of valuation at least `k`;
    /// the top `k` coefficients of the result are unknown and set to zero.
    pub fn shift_down(&self, a: &TruncElem, k: usize) -> TruncElem {
        debug_assert!(a.valuation() >= k);
        let mut out = vec![0; self.level];
        for i in k..self.level {
            out[i - k] = a.coeffs[i];
        }
        TruncElem { coeffs: out }
    }

    /// Keeps the coefficients of `π^0 .. π^{k-1}`.
    pub fn truncate(&self, a: &TruncElem, k: usize) -> TruncElem {
        let mut out = a.clone();
        for c in out.coeffs.iter_mut().skip(k) {
            *c = 0;
        }
        out
    }

    pub fn inv(&self, a: &TruncElem) -> Result<TruncElem> {
        let f = &self.field;
        let a0inv = f.inv(a.coeffs[0]).ok_or(Error::NotAUnit)?;
        // b_n = -a0^{-1} Σ_{i=1..n} a_i b_{n-i}
        let mut b = vec![0; self.level];
        b[0] = a0inv;
        for n in 1..self.level {
            let mut s = 0;
            for i in 1..=n {
                s = f.add(s, f.mul(a.coeffs[i], b[n - i]));
            }
            b[n] = f.neg(f.mul(a0inv, s));
        }
        Ok(TruncElem { coeffs: b })
    }

    pub fn valuation(&self, a: &TruncElem) -> usize {
        a.valuation()
    }
}

/// A square matrix over `F_q[π]/(π^M)`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncMatrix {
    pub dim: usize,
    pub entries: Vec<TruncElem>,
}

impl TruncMatrix {
    pub fn zero(ring: &TruncRing, dim: usize) -> Self {
        TruncMatrix { dim, entries: vec![ring.zero(); dim * dim] }
    }

    pub fn identity(ring: &TruncRing, dim: usize) -> Self {
        let mut m = Self::zero(ring, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ring.one();
        }
        m
    }

    /// Diagonal matrix `diag(π^{a_1}, …)`; exponents must be non-negative.
    pub fn diag_powers(ring: &TruncRing, exps: &[usize]) -> Self {
        let dim = exps.len();
        let mut m = Self::zero(ring, dim);
        for (i, &a) in exps.iter().enumerate() {
            m.entries[i * dim + i] = ring.monomial(1, a);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> TruncElem) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        TruncMatrix { dim, entries }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &TruncElem {
        &self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: TruncElem) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn mul(&self, ring: &TruncRing, other: &TruncMatrix) -> TruncMatrix {
        let n = self.dim;
        TruncMatrix::from_fn(n, |i, j| {
            let mut acc = ring.zero();
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = ring.add(&acc, &ring.mul(a, other.get(k, j)));
            }
            acc
        })
    }

    pub fn sub(&self, ring: &TruncRing, other: &TruncMatrix) -> TruncMatrix {
        TruncMatrix::from_fn(self.dim, |i, j| ring.sub(self.get(i, j), other.get(i, j)))
    }

    pub fn add(&self, ring: &TruncRing, other: &TruncMatrix) -> TruncMatrix {
        TruncMatrix::from_fn(self.dim, |i, j| ring.add(self.get(i, j), other.get(i, j)))
    }

    /// Reduction modulo `π`, row-major.
    pub fn residue(&self) -> Vec<Fe> {
        self.entries.iter().map(|e| e.coeffs[0]).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.coeffs[0] == 1 && e.coeffs[1..].iter().all(|&c| c == 0)
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// Inverse of a matrix whose residue is invertible: the residue inverse
    /// is lifted by Newton steps `B ← B(2 - AB)`, each doubling the `π`-adic
    /// precision.
    pub fn invert(&self, ring: &TruncRing) -> Result<TruncMatrix> {
        let f = ring.field();
        let n = self.dim;
        let res_inv = fq_mat_inverse(f, n, &self.residue()).ok_or(Error::NotAUnit)?;
        let mut b = TruncMatrix::from_fn(n, |i, j| ring.constant(res_inv[i * n + j]));
        let two = TruncMatrix::from_fn(n, |i, j| {
            if i == j {
                ring.constant(f.add(1, 1))
            } else {
                ring.zero()
            }
        });
        let mut precision = 1;
        while precision < ring.level() {
            let ab = self.mul(ring, &b);
            b = b.mul(ring, &two.sub(ring, &ab));
            precision *= 2;
        }
        Ok(b)
    }
}

/// `mat_invert` of the build contract.
pub fn mat_invert(ring: &TruncRing, a: &TruncMatrix) -> Result<TruncMatrix> {
    a.invert(ring)
}

/// Gauss–Jordan inverse of a row-major `n×n` matrix over `F_q`.
pub fn fq_mat_inverse(f: &Field, n: usize, m: &[Fe]) -> Option<Vec<Fe>> {
    let w = 2 * n;
    let mut a = vec![0; n * w];
    for i in 0..n {
        for j in 0..n {
            a[i * w + j] = m[i * n + j];
        }
        a[i * w + n + i] = 1;
    }
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r * w + col] != 0)?;
        if piv != col {
            for j in 0..w {
                a.swap(piv * w + j, col * w + j);
            }
        }
        let inv = f.inv(a[col * w + col])?;
        for j in 0..w {
            a[col * w + j] = f.mul(inv, a[col * w + j]);
        }
        for r in 0..n {
            if r != col && a[r * w + col] != 0 {
                let c = a[r * w + col];
                for j in 0..w {
                    let v = f.mul(c, a[col * w + j]);
                    a[r * w + j] = f.sub(a[r * w + j], v);
                }
            }
        }
    }
    Some((0..n).flat_map(|i| a[i * w + n..i * w + w].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2m3() -> TruncRing {
        TruncRing::new(Field::new(2, 1).unwrap(), 3)
    }

    #[test]
    fn valuation_examples() {
        let r = f2m3();
        assert_eq!(r.zero().valuation(), 3);
        assert_eq!(r.from_coeffs(&[0, 1, 1]).valuation(), 1);
        let a = r.from_coeffs(&[0, 1, 0]);
        let b = r.from_coeffs(&[0, 0, 1]);
        let ab = r.mul(&a, &b);
        assert!(ab.is_zero());
        assert_eq!(ab.valuation(), 3);
    }

    #[test]
    fn valuation_is_additive_up_to_truncation_exhaustive() {
        let r = f2m3();
        let all: Vec<TruncElem> = (0..8u8).map(|c| r.from_coeffs(&[c & 1, (c >> 1) & 1, (c >> 2) & 1])).collect();
        for x in &all {
            for y in &all {
                let v = (x.valuation() + y.valuation()).min(3);
                assert_eq!(r.mul(x, y).valuation(), v);
            }
        }
    }

    #[test]
    fn invert_identity_and_diagonal() {
        let r = f2m3();
        let id = TruncMatrix::identity(&r, 3);
        assert_eq!(mat_invert(&r, &id).unwrap(), id);

        let mut d = TruncMatrix::identity(&r, 2);
        d.set(1, 1, r.from_coeffs(&[1, 1, 0]));
        let inv = mat_invert(&r, &d).unwrap();
        assert_eq!(inv.get(0, 0), &r.one());
        assert_eq!(inv.get(1, 1), &r.from_coeffs(&[1, 1, 1]));
        assert!(inv.get(0, 1).is_zero() && inv.get(1, 0).is_zero());
    }

    #[test]
    fn singular_residue_is_not_a_unit() {
        let r = f2m3();
        let mut m = TruncMatrix::identity(&r, 2);
        m.set(0, 0, r.from_coeffs(&[0, 1, 0]));
        m.set(1, 0, r.from_coeffs(&[0, 0, 1]));
        assert!(matches!(mat_invert(&r, &m), Err(Error::NotAUnit)));
    }

    #[test]
    fn scalar_inverse() {
        let r = TruncRing::new(Field::new(3, 1).unwrap(), 4);
        let a = r.from_coeffs(&[2, 1, 0, 2]);
        let b = r.inv(&a).unwrap();
        assert_eq!(r.mul(&a, &b), r.one());
        assert!(r.inv(&r.from_coeffs(&[0, 1])).is_err());
    }

    proptest! {
        #[test]
        fn inverse_multiplies_to_identity(
            q_idx in 0usize..3,
            level in 1usize..=4,
            dim in 1usize..=4,
            seed in proptest::collection::vec(any::<u8>(), 64),
        ) {
            let (p, k) = [(2, 1), (3, 1), (2, 2)][q_idx];
            let field = Field::new(p, k).unwrap();
            let q = field.q() as u8;
            let ring = TruncRing::new(field.clone(), level);
            let mut it = seed.iter().cycle();
            let m = TruncMatrix::from_fn(dim, |_, _| {
                let c: Vec<u8> = (0..level).map(|_| it.next().unwrap() % q).collect();
                ring.from_coeffs(&c)
            });
            match m.invert(&ring) {
                Ok(inv) => {
                    prop_assert!(m.mul(&ring, &inv).is_identity());
                    prop_assert!(inv.mul(&ring, &m).is_identity());
                }
                Err(Error::NotAUnit) => {
                    prop_assert!(fq_mat_inverse(&field, dim, &m.residue()).is_none());
                }
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }
}
