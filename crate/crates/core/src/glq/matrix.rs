//! Small dense matrices and polynomials over `F_q`.

use crate::field::{Fe, Field};

/// Bits used per entry when packing a matrix into a `u64`.
pub fn entry_bits(q: u32) -> u32 {
    32 - (q - 1).leading_zeros()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMat {
    pub n: usize,
    pub e: Vec<Fe>,
}

impl FqMat {
    pub fn zero(n: usize) -> Self {
        FqMat { n, e: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.e[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.e[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.e[i * self.n + j] = v;
    }

    pub fn mul(&self, f: &Field, o: &FqMat) -> FqMat {
        let n = self.n;
        let mut out = FqMat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.e[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = o.e[k * n + j];
                    if b != 0 {
                        out.e[i * n + j] = f.add(out.e[i * n + j], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, f: &Field, o: &FqMat) -> FqMat {
        FqMat { n: self.n, e: self.e.iter().zip(&o.e).map(|(&a, &b)| f.add(a, b)).collect() }
    }

    pub fn scale(&self, f: &Field, c: Fe) -> FqMat {
        FqMat { n: self.n, e: self.e.iter().map(|&a| f.mul(c, a)).collect() }
    }

    pub fn inverse(&self, f: &Field) -> Option<FqMat> {
        crate::field::fq_mat_inverse(f, self.n, &self.e).map(|e| FqMat { n: self.n, e })
    }

    pub fn rank(&self, f: &Field) -> usize {
        let n = self.n;
        let mut a = self.e.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| a[r * n + col] != 0) else { continue };
            for j in 0..n {
                a.swap(piv * n + j, rank * n + j);
            }
            let inv = f.inv(a[rank * n + col]).unwrap();
            for r in rank + 1..n {
                let c = f.mul(a[r * n + col], inv);
                if c != 0 {
                    for j in 0..n {
                        let v = f.mul(c, a[rank * n + j]);
                        a[r * n + j] = f.sub(a[r * n + j], v);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self, f: &Field) -> bool {
        self.rank(f) == self.n
    }

    pub fn pack(&self, q: u32) -> u64 {
        let b = entry_bits(q);
        debug_assert!(self.e.len() as u32 * b <= 64);
        self.e.iter().fold(0u64, |acc, &x| (acc << b) | x as u64)
    }

    pub fn unpack(n: usize, q: u32, mut key: u64) -> FqMat {
        let b = entry_bits(q);
        let mask = (1u64 << b) - 1;
        let mut e = vec![0; n * n];
        for slot in e.iter_mut().rev() {
            *slot = (key & mask) as Fe;
            key >>= b;
        }
        FqMat { n, e }
    }

    /// Characteristic polynomial `det(xI - A)`, monic, lowest degree first.
    pub fn char_poly(&self, f: &Field) -> Vec<Fe> {
        let n = self.n;
        let mut h = self.e.clone();
        let at = |i: usize, j: usize| i * n + j;
        // reduce to upper Hessenberg form by similarity
        for m in 0..n.saturating_sub(2) {
            let Some(piv) = (m + 1..n).find(|&i| h[at(i, m)] != 0) else { continue };
            if piv != m + 1 {
                for j in 0..n {
                    h.swap(at(piv, j), at(m + 1, j));
                }
                for i in 0..n {
                    h.swap(at(i, piv), at(i, m + 1));
                }
            }
            let inv = f.inv(h[at(m + 1, m)]).unwrap();
            for i in m + 2..n {
                let t = f.mul(h[at(i, m)], inv);
                if t == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = f.mul(t, h[at(m + 1, j)]);
                    h[at(i, j)] = f.sub(h[at(i, j)], v);
                }
                for r in 0..n {
                    let v = f.mul(t, h[at(r, i)]);
                    h[at(r, m + 1)] = f.add(h[at(r, m + 1)], v);
                }
            }
        }
        // p_k = (x - h_kk) p_{k-1} - Σ_{i<k} h_ik (Π_{j=i+1..k} h_{j,j-1}) p_{i-1}
        let mut p: Vec<Vec<Fe>> = vec![vec![1]];
        for k in 0..n {
            let prev = &p[k];
            let mut next = vec![0; k + 2];
            for (d, &c) in prev.iter().enumerate() {
                next[d + 1] = f.add(next[d + 1], c);
                next[d] = f.sub(next[d], f.mul(h[at(k, k)], c));
            }
            let mut prod: Fe = 1;
            for i in (0..k).rev() {
                prod = f.mul(prod, h[at(i + 1, i)]);
                let coef = f.mul(h[at(i, k)], prod);
                if coef != 0 {
                    for (d, &c) in p[i].iter().enumerate() {
                        next[d] = f.sub(next[d], f.mul(coef, c));
                    }
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }

    /// `poly(A)` by Horner's rule.
    pub fn eval_poly(&self, f: &Field, poly: &[Fe]) -> FqMat {
        let n = self.n;
        let mut acc = FqMat::zero(n);
        for &c in poly.iter().rev() {
            acc = acc.mul(f, self);
            for i in 0..n {
                acc.e[i * n + i] = f.add(acc.e[i * n + i], c);
            }
        }
        acc
    }

    pub fn pow(&self, f: &Field, mut e: u64) -> FqMat {
        let mut r = FqMat::identity(self.n);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(f, &b);
            }
            b = b.mul(f, &b);
            e >>= 1;
        }
        r
    }
}

fn poly_trim(p: &mut Vec<Fe>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `b`.
pub fn poly_rem(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let db = b.len() - 1;
    if db == 0 {
        return vec![0];
    }
    let mut r = a.to_vec();
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[shift + j] = f.sub(r[shift + j], f.mul(c, bj));
            }
        }
        r.pop();
    }
    poly_trim(&mut r);
    if r.is_empty() {
        r.push(0);
    }
    r
}

/// Quotient of `a` by the monic `b`, assuming exact division.
pub fn poly_div_exact(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut quo = vec![0; a.len() - db];
    for i in (0..quo.len()).rev() {
        let c = r[i + db];
        quo[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] = f.sub(r[i + j], f.mul(c, bj));
        }
    }
    quo
}

pub fn poly_is_zero(p: &[Fe]) -> bool {
    p.iter().all(|&c| c == 0)
}

/// All monic irreducible polynomials over `F_q` of degree `1..=max_deg`,
/// ordered by degree then lexicographically on coefficients.
pub fn monic_irreducibles(f: &Field, max_deg: usize) -> Vec<Vec<Fe>> {
    let q = f.q() as usize;
    let mut irr: Vec<Vec<Fe>> = Vec::new();
    for d in 1..=max_deg {
        let count = q.pow(d as u32);
        for code in 0..count {
            let mut p = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                p.push((c % q) as Fe);
                c /= q;
            }
            p.push(1);
            let reducible = irr
                .iter()
                .take_while(|g| 2 * (g.len() - 1) <= d)
                .any(|g| poly_is_zero(&poly_rem(f, &p, g)));
            if !reducible {
                irr.push(p);
            }
        }
    }
    irr
}

/// A complete similarity invariant of a square matrix: for every irreducible
/// factor `p` of the characteristic polynomial with multiplicity `m`, the ranks
/// of `p(A)^k` for `k = 1..=m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimilarityKey(pub Vec<(Vec<Fe>, Vec<u8>)>);

pub fn similarity_key(f: &Field, a: &FqMat, irreducibles: &[Vec<Fe>]) -> SimilarityKey {
    let mut cp = a.char_poly(f);
    let mut parts = Vec::new();
    for p in irreducibles {
        if cp.len() == 1 {
            break;
        }
        if p.len() > cp.len() {
            break;
        }
        let mut mult = 0;
        while cp.len() >= p.len() && poly_is_zero(&poly_rem(f, &cp, p)) {
            cp = poly_div_exact(f, &cp, p);
            mult += 1;
        }
        if mult > 0 {
            let pa = a.eval_poly(f, p);
            let mut pk = pa.clone();
            let mut ranks = Vec::with_capacity(mult);
            for k in 0..mult {
                if k > 0 {
                    pk = pk.mul(f, &pa);
                }
                ranks.push(pk.rank(f) as u8);
            }
            parts.push((p.clone(), ranks));
        }
    }
    SimilarityKey(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_roundtrip() {
        let f = Field::new(3, 1).unwrap();
        let mut m = FqMat::identity(3);
        m.set(0, 2, 2);
        m.set(2, 1, 1);
        assert_eq!(FqMat::unpack(3, f.q(), m.pack(f.q())), m);
        assert_eq!(entry_bits(2), 1);
        assert_eq!(entry_bits(4), 2);
        assert_eq!(entry_bits(5), 3);
        assert_eq!(entry_bits(16), 4);
    }

    #[test]
    fn char_poly_matches_cofactor_expansion() {
        let f = Field::new(5, 1).unwrap();
        // companion matrix of x^3 + 2x^2 + 3x + 4
        let mut c = FqMat::zero(3);
        c.set(1, 0, 1);
        c.set(2, 1, 1);
        c.set(0, 2, f.neg(4));
        c.set(1, 2, f.neg(3));
        c.set(2, 2, f.neg(2));
        assert_eq!(c.char_poly(&f), vec![4, 3, 2, 1]);
        // conjugating by an invertible matrix keeps the polynomial
        let mut g = FqMat::identity(3);
        g.set(0, 1, 3);
        g.set(2, 0, 1);
        let conj = g.mul(&f, &c).mul(&f, &g.inverse(&f).unwrap());
        assert_eq!(conj.char_poly(&f), vec![4, 3, 2, 1]);
        assert!(poly_is_zero(&conj.eval_poly(&f, &[4, 3, 2, 1]).e));
    }

    #[test]
    fn irreducible_counts() {
        // number of monic irreducibles of degree d over F_q
        let f2 = Field::new(2, 1).unwrap();
        let counts: Vec<usize> =
            (1..=4).map(|d| monic_irreducibles(&f2, 4).iter().filter(|p| p.len() - 1 == d).count()).collect();
        assert_eq!(counts, vec![2, 1, 2, 3]);
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(monic_irreducibles(&f4, 2).len(), 4 + 6);
    }

    #[test]
    fn similarity_key_separates_jordan_types() {
        let f = Field::new(2, 1).unwrap();
        let irr = monic_irreducibles(&f, 3);
        let id = FqMat::identity(3);
        let mut j = FqMat::identity(3);
        j.set(0, 1, 1);
        let mut j2 = j.clone();
        j2.set(1, 2, 1);
        let keys = [similarity_key(&f, &id, &irr), similarity_key(&f, &j, &irr), similarity_key(&f, &j2, &irr)];
        assert_ne!(keys[0], keys[1]);
        assert_ne!(keys[1], keys[2]);
        assert_ne!(keys[0], keys[2]);
    }
}
