//! Fully enumerated `GL_n(F_q)` with its conjugacy classes.

use std::collections::{HashMap, VecDeque};

use super::matrix::FqMat;
use crate::error::{Error, Result};
use crate::field::Field;

pub const DEFAULT_GROUP_BOUND: u64 = 25_000;
pub const GROUP_BOUND_ENV: &str = "PARAHORIC_LAB_MAX_GROUP";

/// Largest group order that will be fully enumerated.
pub fn group_bound() -> u64 {
    std::env::var(GROUP_BOUND_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_GROUP_BOUND)
}

/// `|GL_n(F_q)| = Π_{i<n} (q^n - q^i)`.
pub fn gl_order(n: usize, q: u64) -> u64 {
    let qn = q.pow(n as u32);
    (0..n as u32).map(|i| qn - q.pow(i)).product()
}

#[derive(Clone, Debug)]
pub struct ConjClass {
    /// Index of the least element of the class.
    pub rep: u32,
    pub size: u64,
    /// Order of any element of the class.
    pub order: u32,
    /// `powers[t]` is the class of `rep^t`, for `t < order`.
    pub powers: Vec<u32>,
}

#[derive(Debug)]
pub struct GLGroup {
    n: usize,
    field: Field,
    keys: Vec<u64>,
    index: HashMap<u64, u32>,
    inverse: Vec<u32>,
    class_of: Vec<u32>,
    classes: Vec<ConjClass>,
    exponent: u32,
}

/// Enumerates `GL_n(F_q)` and partitions it into conjugacy classes, subject
/// to the configured size bound.
pub fn conjugacy_classes(n: usize, field: &Field) -> Result<GLGroup> {
    GLGroup::with_bound(n, field, group_bound())
}

impl GLGroup {
    pub fn with_bound(n: usize, field: &Field, bound: u64) -> Result<Self> {
        let q = field.q();
        let order = gl_order(n, q as u64);
        if order > bound {
            return Err(Error::SizeLimit { what: format!("GL_{n}(F_{q})"), size: order, bound });
        }
        if n == 0 || n * n * super::matrix::entry_bits(q) as usize > 64 {
            return Err(Error::InvalidArgument(format!("matrix size {n} unsupported over F_{q}")));
        }
        let total = (q as u64).pow((n * n) as u32);
        let mut keys = Vec::with_capacity(order as usize);
        let mut m = FqMat::zero(n);
        for code in 0..total {
            let mut c = code;
            for slot in m.e.iter_mut().rev() {
                *slot = (c % q as u64) as u8;
                c /= q as u64;
            }
            if m.is_invertible(field) {
                keys.push(m.pack(q));
            }
        }
        if keys.len() as u64 != order {
            return Err(Error::Invariant(format!("enumerated {} elements, expected {order}", keys.len())));
        }
        let index: HashMap<u64, u32> = keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        let inverse = keys
            .iter()
            .map(|&k| {
                let inv = FqMat::unpack(n, q, k).inverse(field).expect("enumerated element is invertible");
                index[&inv.pack(q)]
            })
            .collect();

        let mut g = GLGroup {
            n,
            field: field.clone(),
            keys,
            index,
            inverse,
            class_of: Vec::new(),
            classes: Vec::new(),
            exponent: 1,
        };
        g.compute_classes();
        Ok(g)
    }

    fn generators(&self) -> Vec<u32> {
        let n = self.n;
        let f = &self.field;
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for b in f.additive_basis() {
                    let mut t = FqMat::identity(n);
                    t.set(i, j, b);
                    gens.push(self.index_of(&t).unwrap());
                }
            }
        }
        let mut d = FqMat::identity(n);
        d.set(0, 0, f.generator());
        gens.push(self.index_of(&d).unwrap());
        gens
    }

    fn compute_classes(&mut self) {
        let total = self.keys.len();
        let gens = self.generators();
        let mut class_of = vec![u32::MAX; total];
        let mut members: Vec<Vec<u32>> = Vec::new();
        let identity = self.index_of(&FqMat::identity(self.n)).unwrap();
        let starts = std::iter::once(identity).chain(0..total as u32);
        for start in starts {
            if class_of[start as usize] != u32::MAX {
                continue;
            }
            let cid = members.len() as u32;
            let mut queue = VecDeque::from([start]);
            class_of[start as usize] = cid;
            let mut orbit = vec![start];
            while let Some(x) = queue.pop_front() {
                for &s in &gens {
                    let y = self.mul(self.mul(s, x), self.inverse[s as usize]);
                    if class_of[y as usize] == u32::MAX {
                        class_of[y as usize] = cid;
                        orbit.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.push(orbit);
        }
        self.class_of = class_of;
        let mut exponent = 1u32;
        let classes: Vec<ConjClass> = members
            .iter()
            .map(|orbit| {
                let rep = *orbit.iter().min().unwrap();
                let mut powers = vec![self.class_of[identity as usize]];
                let mut x = rep;
                while x != identity {
                    powers.push(self.class_of[x as usize]);
                    x = self.mul(x, rep);
                }
                let order = powers.len() as u32;
                exponent = crate::cyclo::lcm(exponent, order);
                ConjClass { rep, size: orbit.len() as u64, order, powers }
            })
            .collect();
        self.classes = classes;
        self.exponent = exponent;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.keys.len() as u64
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn element(&self, idx: u32) -> FqMat {
        FqMat::unpack(self.n, self.field.q(), self.keys[idx as usize])
    }

    pub fn index_of(&self, m: &FqMat) -> Option<u32> {
        self.index.get(&m.pack(self.field.q())).copied()
    }

    pub fn index_of_key(&self, key: u64) -> Option<u32> {
        self.index.get(&key).copied()
    }

    pub fn class_of(&self, idx: u32) -> u32 {
        self.class_of[idx as usize]
    }

    /// Conjugacy class of an invertible matrix.
    pub fn class_of_matrix(&self, m: &FqMat) -> Option<u32> {
        self.index_of(m).map(|i| self.class_of(i))
    }

    pub fn class_of_key(&self, key: u64) -> Option<u32> {
        self.index_of_key(key).map(|i| self.class_of(i))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let q = self.field.q();
        let m = self.element(a).mul(&self.field, &self.element(b));
        self.index[&m.pack(q)]
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn inverse_class(&self, c: usize) -> u32 {
        let cl = &self.classes[c];
        cl.powers[(cl.order as usize - 1) % cl.order as usize]
    }

    /// Class multiplication coefficients, flattened as `[(i * r + j) * r + k]`:
    /// the number of `x ∈ C_i` with `x^{-1} z_k ∈ C_j`, where `z_k` represents `C_k`.
    pub fn class_coefficients(&self) -> Vec<u64> {
        let r = self.classes.len();
        let mut c = vec![0u64; r * r * r];
        for (k, cl) in self.classes.iter().enumerate() {
            let z = cl.rep;
            for x in 0..self.keys.len() as u32 {
                let i = self.class_of(x) as usize;
                let j = self.class_of(self.mul(self.inverse[x as usize], z)) as usize;
                c[(i * r + j) * r + k] += 1;
            }
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glq::matrix::{monic_irreducibles, similarity_key};
    use std::collections::HashSet;

    #[test]
    fn orders() {
        assert_eq!(gl_order(2, 2), 6);
        assert_eq!(gl_order(2, 3), 48);
        assert_eq!(gl_order(3, 2), 168);
        assert_eq!(gl_order(4, 2), 20160);
        assert_eq!(gl_order(4, 3), 24_261_120);
    }

    #[test]
    fn gl2_f2_is_s3() {
        let g = GLGroup::with_bound(2, &Field::new(2, 1).unwrap(), 100).unwrap();
        assert_eq!(g.order(), 6);
        let mut sizes: Vec<u64> = g.classes().iter().map(|c| c.size).collect();
        assert_eq!(sizes[0], 1);
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(g.exponent(), 6);
    }

    #[test]
    fn small_class_counts() {
        let f3 = Field::new(3, 1).unwrap();
        let g = GLGroup::with_bound(1, &f3, 100).unwrap();
        assert_eq!((g.order(), g.num_classes()), (2, 2));
        let g = GLGroup::with_bound(2, &f3, 100).unwrap();
        assert_eq!((g.order(), g.num_classes()), (48, 8));
    }

    #[test]
    fn size_limit() {
        let f = Field::new(3, 1).unwrap();
        assert!(matches!(GLGroup::with_bound(4, &f, 25_000), Err(Error::SizeLimit { .. })));
    }

    /// Classes found by orbit search agree with the similarity invariant.
    #[test]
    fn classes_match_similarity_invariants() {
        for (n, p, k) in [(2, 2, 1), (2, 3, 1), (2, 2, 2), (3, 2, 1), (2, 5, 1)] {
            let f = Field::new(p, k).unwrap();
            let g = GLGroup::with_bound(n, &f, 25_000).unwrap();
            let irr = monic_irreducibles(&f, n);
            let mut key_class: HashMap<_, u32> = HashMap::new();
            for x in 0..g.order() as u32 {
                let key = similarity_key(&f, &g.element(x), &irr);
                let c = *key_class.entry(key).or_insert(g.class_of(x));
                assert_eq!(c, g.class_of(x));
            }
            let distinct: HashSet<u32> = key_class.values().copied().collect();
            assert_eq!(distinct.len(), g.num_classes());
            let total: u64 = g.classes().iter().map(|c| c.size).sum();
            assert_eq!(total, g.order());
        }
    }
}
