//! Exact values in the cyclotomic integers `ℤ[ζ_m]`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::ser::{Serialize, SerializeStruct, Serializer};

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

/// Coefficients of the `m`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(m: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    assert!(m >= 1);
    // x^m - 1 divided by every Φ_d with d | m, d < m.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let phi_d = cyclotomic_poly(d);
            num = exact_div_monic(&num, &phi_d);
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(m, p.clone());
    p
}

fn exact_div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut quo = vec![0i64; a.len() - db];
    for i in (0..quo.len()).rev() {
        let c = r[i + db];
        quo[i] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[i + j] -= c * bj;
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0), "inexact cyclotomic division");
    quo
}

/// Reduces a dense polynomial modulo `Φ_m`, returning `φ(m)` coefficients.
fn reduce(m: u32, dense: &mut Vec<i64>) -> Vec<i64> {
    let phi = cyclotomic_poly(m);
    let d = phi.len() - 1;
    for i in (d..dense.len()).rev() {
        let c = dense[i];
        if c != 0 {
            for (j, &pj) in phi.iter().enumerate() {
                dense[i - d + j] -= c * pj;
            }
        }
    }
    dense.resize(d, 0);
    std::mem::take(dense)
}

/// An element of `ℤ[ζ_m]` in the power basis `1, ζ, …, ζ^{φ(m)-1}`.
///
/// Values with different `m` are compared after lifting to a common order.
#[derive(Clone, Debug)]
pub struct CycValue {
    m: u32,
    coeffs: Vec<i64>,
}

impl CycValue {
    pub fn from_int(m: u32, n: i64) -> Self {
        let mut dense = vec![n];
        CycValue { m, coeffs: reduce(m, &mut dense) }
    }

    pub fn zero(m: u32) -> Self {
        Self::from_int(m, 0)
    }

    pub fn one(m: u32) -> Self {
        Self::from_int(m, 1)
    }

    /// `ζ_m^k`.
    pub fn root_power(m: u32, k: i64) -> Self {
        let k = k.rem_euclid(m as i64) as usize;
        let mut dense = vec![0; k + 1];
        dense[k] = 1;
        CycValue { m, coeffs: reduce(m, &mut dense) }
    }

    /// Builds `Σ_k c_k ζ_m^k` from exponent-indexed coefficients (any length).
    pub fn from_exponents(m: u32, coeffs: &[i64]) -> Self {
        let mut dense = vec![0i64; m as usize];
        for (k, &c) in coeffs.iter().enumerate() {
            dense[k % m as usize] += c;
        }
        CycValue { m, coeffs: reduce(m, &mut dense) }
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Rewrites the value in `ℤ[ζ_n]` for a multiple `n` of `m`.
    pub fn lift(&self, n: u32) -> Self {
        if n == self.m {
            return self.clone();
        }
        assert!(n.is_multiple_of(self.m), "cannot lift order {} to {}", self.m, n);
        let step = (n / self.m) as usize;
        let mut dense = vec![0i64; n as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            dense[i * step] += c;
        }
        CycValue { m: n, coeffs: reduce(n, &mut dense) }
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.m == other.m {
            (self.clone(), other.clone())
        } else {
            let n = lcm(self.m, other.m);
            (self.lift(n), other.lift(n))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.m != other.m {
            let (a, b) = self.common(other);
            return a.add(&b);
        }
        CycValue { m: self.m, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn add_assign(&mut self, other: &Self) {
        if self.m == other.m {
            for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
                *a += b;
            }
        } else {
            *self = self.add(other);
        }
    }

    pub fn neg(&self) -> Self {
        CycValue { m: self.m, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, n: i64) -> Self {
        CycValue { m: self.m, coeffs: self.coeffs.iter().map(|a| a * n).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.m != other.m {
            let (a, b) = self.common(other);
            return a.mul(&b);
        }
        if let Some(n) = self.as_integer() {
            return other.scale(n);
        }
        if let Some(n) = other.as_integer() {
            return self.scale(n);
        }
        let mut dense = vec![0i64; self.coeffs.len() + other.coeffs.len()];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                dense[i + j] += a * b;
            }
        }
        CycValue { m: self.m, coeffs: reduce(self.m, &mut dense) }
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        if self.is_rational() {
            return self.clone();
        }
        let m = self.m as usize;
        let mut dense = vec![0i64; m];
        for (i, &c) in self.coeffs.iter().enumerate() {
            dense[(m - i) % m] += c;
        }
        CycValue { m: self.m, coeffs: reduce(self.m, &mut dense) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(|&c| c == 0)
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.is_rational().then(|| self.coeffs.first().copied().unwrap_or(0))
    }

    /// Exact division by a nonzero integer; `None` unless every coefficient divides.
    pub fn div_exact(&self, n: i64) -> Option<Self> {
        if self.coeffs.iter().all(|c| c % n == 0) {
            Some(CycValue { m: self.m, coeffs: self.coeffs.iter().map(|c| c / n).collect() })
        } else {
            None
        }
    }

    /// Image in `F_ℓ` under `ζ_m ↦ z`, where `z` is a primitive `m`-th root mod `ℓ`.
    pub fn reduce_mod(&self, z: u64, ell: u64) -> u64 {
        let mut acc = 0u64;
        let mut zp = 1u64;
        for &c in &self.coeffs {
            let cm = c.rem_euclid(ell as i64) as u64;
            acc = (acc + cm * zp % ell) % ell;
            zp = zp * z % ell;
        }
        acc
    }

    /// Total order on canonical forms, used for deterministic sorting.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        let (a, b) = self.common(other);
        a.coeffs.cmp(&b.coeffs)
    }
}

impl PartialEq for CycValue {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = self.common(other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CycValue {}

impl fmt::Display for CycValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_integer() {
            return write!(f, "{n}");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (_, 1) => write!(f, "z{}^{}", self.m, i)?,
                _ => write!(f, "{a}*z{}^{}", self.m, i)?,
            }
        }
        Ok(())
    }
}

impl Serialize for CycValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if let Some(n) = self.as_integer() {
            return s.serialize_i64(n);
        }
        let mut st = s.serialize_struct("CycValue", 2)?;
        st.serialize_field("root_order", &self.m)?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(420).len() - 1, 96);
    }

    #[test]
    fn sum_of_roots_of_unity() {
        // 1 + ζ_3 + ζ_3² = 0, ζ_4² = -1
        let s = CycValue::one(3).add(&CycValue::root_power(3, 1)).add(&CycValue::root_power(3, 2));
        assert!(s.is_zero());
        assert_eq!(CycValue::root_power(4, 2).as_integer(), Some(-1));
        // ζ_8 + ζ_8^{-1} squared is 2
        let r = CycValue::root_power(8, 1).add(&CycValue::root_power(8, -1));
        assert_eq!(r.mul(&r).as_integer(), Some(2));
    }

    #[test]
    fn mixed_orders_compare_after_lifting() {
        assert_eq!(CycValue::from_int(4, 3), CycValue::from_int(6, 3));
        assert_eq!(CycValue::root_power(3, 1), CycValue::root_power(6, 2));
        let x = CycValue::root_power(4, 1).mul(&CycValue::root_power(3, 1));
        assert_eq!(x, CycValue::root_power(12, 7));
    }

    #[test]
    fn reduction_mod_prime_is_a_ring_map() {
        // ℓ = 13 ≡ 1 mod 12, 2 is a primitive root mod 13, z = 2^{(13-1)/12} = 2
        let a = CycValue::from_exponents(12, &[1, 2, 0, -1, 5]);
        let b = CycValue::from_exponents(12, &[0, -3, 1, 0, 0, 0, 7]);
        let z = 2;
        let ell = 13;
        assert_eq!(a.mul(&b).reduce_mod(z, ell), a.reduce_mod(z, ell) * b.reduce_mod(z, ell) % ell);
    }

    proptest! {
        #[test]
        fn conjugation_is_an_involutive_ring_map(
            m in prop::sample::select(vec![1u32, 2, 3, 4, 5, 6, 8, 12, 15, 24]),
            a in prop::collection::vec(-5i64..5, 0..30),
            b in prop::collection::vec(-5i64..5, 0..30),
        ) {
            let x = CycValue::from_exponents(m, &a);
            let y = CycValue::from_exponents(m, &b);
            prop_assert_eq!(x.conj().conj(), x.clone());
            prop_assert_eq!(x.mul(&y).conj(), x.conj().mul(&y.conj()));
            prop_assert_eq!(x.add(&y).conj(), x.conj().add(&y.conj()));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            // x·conj(x) is real
            let n = x.mul(&x.conj());
            prop_assert_eq!(n.conj(), n);
        }
    }
}
