//! Exact arithmetic over finite fields `F_q` and truncated power-series
//! rings `F_q[π]/(π^M)`.
//!
//! Field elements are encoded as integers in `0..q`: the base-`p` digits of
//! the encoding are the coefficients of the polynomial representative modulo
//! the defining polynomial, lowest degree first.

mod trunc;

use std::fmt;
use std::sync::Arc;

pub use trunc::{fq_mat_inverse, mat_invert, TruncElem, TruncMatrix, TruncRing};

use crate::error::{Error, Result};

/// Default upper bound on `q` accepted by [`Field::new`].
pub const DEFAULT_FIELD_BOUND: u64 = 16;

pub type Fe = u8;

struct Tables {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<Fe>,
    mul: Vec<Fe>,
    neg: Vec<Fe>,
    inv: Vec<Fe>,
    generator: Fe,
}

/// The finite field `F_q`, `q = p^k`, with precomputed operation tables.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct Field {
    t: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.t.q)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.t.p == other.t.p && self.t.k == other.t.k
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Polynomials over F_p as coefficient vectors, lowest degree first, no
// trailing zeros (the zero polynomial is empty).
fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db], p - 2, p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * bi % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn pow_mod(mut b: u32, mut e: u32, m: u32) -> u32 {
    let mut r = 1u64;
    let mut b64 = b as u64 % m as u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b64 % m as u64;
        }
        b64 = b64 * b64 % m as u64;
        e >>= 1;
    }
    b = r as u32;
    b
}

/// Monic polynomials of the given degree, lower coefficients enumerated in
/// increasing integer encoding.
fn monic_polys(p: u32, deg: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = p.pow(deg);
    (0..count).map(move |mut code| {
        let mut c = Vec::with_capacity(deg as usize + 1);
        for _ in 0..deg {
            c.push(code % p);
            code /= p;
        }
        c.push(1);
        c
    })
}

pub(crate) fn is_irreducible_fp(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    for d in 1..=deg / 2 {
        for cand in monic_polys(p, d) {
            if poly_rem(poly, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds `F_{p^k}` with the default bound on `q`.
    pub fn new(p: u32, k: u32) -> Result<Self> {
        Self::with_bound(p, k, DEFAULT_FIELD_BOUND)
    }

    pub fn with_bound(p: u32, k: u32, bound: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("field degree must be at least 1".into()));
        }
        let order = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if order > bound || order > 256 {
            return Err(Error::FieldTooLarge { order, bound: bound.min(256) });
        }
        let q = order as u32;
        let modulus = monic_polys(p, k)
            .find(|m| is_irreducible_fp(m, p))
            .ok_or(Error::NoIrreducible { p, k })?;

        let digits = |mut x: u32| -> Vec<u32> {
            (0..k)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let encode = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&s) as Fe;
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod, &modulus, p);
                r.resize(k as usize, 0);
                mul[(a * q + b) as usize] = encode(&r) as Fe;
            }
        }
        let mut neg = vec![0; qs];
        let mut inv = vec![0; qs];
        for a in 0..q {
            for b in 0..q {
                if add[(a * q + b) as usize] == 0 {
                    neg[a as usize] = b as Fe;
                }
                if a != 0 && mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as Fe;
                }
            }
        }
        let mut t = Tables { p, k, q, modulus, add, mul, neg, inv, generator: 1 };
        t.generator = (1..q)
            .find(|&g| {
                let mut x = g as Fe;
                let mut ord = 1;
                while x != 1 {
                    x = t.mul[(x as u32 * q + g) as usize];
                    ord += 1;
                }
                ord == q - 1
            })
            .ok_or_else(|| Error::Invariant("multiplicative group is not cyclic".into()))?
            as Fe;
        Ok(Field { t: Arc::new(t) })
    }

    pub fn p(&self) -> u32 {
        self.t.p
    }

    pub fn k(&self) -> u32 {
        self.t.k
    }

    pub fn q(&self) -> u32 {
        self.t.q
    }

    /// Coefficients of the defining polynomial over `F_p`, lowest first.
    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    /// A generator of the cyclic group `F_q^×` (the least one in the encoding).
    pub fn generator(&self) -> Fe {
        self.t.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        0..self.t.q as Fe
    }

    /// An `F_p`-basis of `F_q`: the powers of `x`.
    pub fn additive_basis(&self) -> Vec<Fe> {
        (0..self.t.k).map(|i| self.t.p.pow(i) as Fe).collect()
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        self.t.add[a as usize * self.t.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        self.t.mul[a as usize * self.t.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.t.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        (a != 0).then(|| self.t.inv[a as usize])
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut r = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Discrete logarithm of a nonzero element to the base [`Field::generator`].
    pub fn log(&self, a: Fe) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let g = self.generator();
        let mut x = 1;
        for e in 0..self.q() - 1 {
            if x == a {
                return Some(e);
            }
            x = self.mul(x, g);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.q(), 2);
        assert_eq!(f2.modulus(), &[0, 1]);
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.q(), 3);
        assert_eq!(f3.mul(2, 2), 1);
    }

    #[test]
    fn f4_multiplicative_group_has_order_three() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.q(), 4);
        assert_eq!(f.modulus(), &[1, 1, 1]);
        for x in 1..4 {
            let cube = f.mul(x, f.mul(x, x));
            assert_eq!(cube, 1);
        }
        assert!(f.elements().filter(|&x| x != 0).any(|x| f.mul(x, x) != 1));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Field::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(Field::new(5, 2), Err(Error::FieldTooLarge { .. })));
        assert!(Field::with_bound(5, 2, 25).is_ok());
        assert!(Field::new(2, 0).is_err());
    }

    #[test]
    fn field_axioms_exhaustive_small_orders() {
        for &(p, k) in &[(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let f = Field::new(p, k).unwrap();
            let q = f.q() as Fe;
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
            assert_eq!(f.pow(f.generator(), (f.q() - 1) as u64), 1);
            assert_eq!(f.log(f.generator()), Some(1 % (f.q() - 1)));
        }
    }
}
