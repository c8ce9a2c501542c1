//! `𝔬`-lattices in `F^R` in Hermite normal form, for `𝔬 = F_q[[π]]`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, Field, TruncElem, TruncMatrix, TruncRing};
use crate::orders::AffineWeylElem;

/// A lattice `π^N 𝔬^R ⊆ L` given by its column Hermite normal form: upper
/// triangular, diagonal `π^{k_i}`, and each entry above the diagonal in row
/// `i` reduced modulo `π^{k_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    k: Vec<usize>,
    /// Entries `(i, j)` with `i < j`, row-major.
    upper: Vec<TruncElem>,
}

impl Lattice {
    pub fn rank(&self) -> usize {
        self.k.len()
    }

    /// Diagonal exponents of the normal form.
    pub fn exponents(&self) -> &[usize] {
        &self.k
    }

    /// `log_q [𝔬^R : L]`.
    pub fn index(&self) -> usize {
        self.k.iter().sum()
    }

    fn upper_pos(r: usize, i: usize, j: usize) -> usize {
        // rows 0..i contribute (r-1) + (r-2) + ... entries
        i * (2 * r - i - 1) / 2 + (j - i - 1)
    }

    /// Entry `(i, j)` of the normal form.
    pub fn entry(&self, ring: &TruncRing, i: usize, j: usize) -> TruncElem {
        match i.cmp(&j) {
            Ordering::Less => self.upper[Self::upper_pos(self.rank(), i, j)].clone(),
            Ordering::Equal => ring.monomial(1, self.k[i]),
            Ordering::Greater => ring.zero(),
        }
    }

    pub fn columns(&self, ring: &TruncRing) -> Vec<Vec<TruncElem>> {
        let r = self.rank();
        (0..r).map(|j| (0..r).map(|i| self.entry(ring, i, j)).collect()).collect()
    }

    /// Flat coefficient list of the normal form, used for ordering and export.
    pub fn normal_form(&self) -> Vec<Vec<Fe>> {
        self.upper.iter().map(|e| e.coeffs.clone()).collect()
    }
}

/// Vertices are ordered by index in `𝔬^R`, then exponents, then entries.
impl Ord for Lattice {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.index(), &self.k, &self.upper).cmp(&(other.index(), &other.k, &other.upper))
    }
}

impl PartialOrd for Lattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.rank();
        write!(f, "[")?;
        for i in 0..r {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..r {
                if j > 0 {
                    write!(f, " ")?;
                }
                match i.cmp(&j) {
                    Ordering::Less => write!(f, "{}", poly_string(&self.upper[Lattice::upper_pos(r, i, j)].coeffs))?,
                    Ordering::Equal => write!(f, "π^{}", self.k[i])?,
                    Ordering::Greater => write!(f, "0")?,
                }
            }
        }
        write!(f, "]")
    }
}

fn poly_string(c: &[Fe]) -> String {
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(i, &a)| match i {
            0 => a.to_string(),
            _ if a == 1 => format!("π^{i}"),
            _ => format!("{a}π^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Arithmetic context: lattices of rank `R` modulo `π^M 𝔬^R`. Every lattice
/// handled must contain `π^M 𝔬^R`, which makes all computations exact.
#[derive(Clone, Debug)]
pub struct LatticeSpace {
    ring: TruncRing,
    r: usize,
}

pub type Vector = Vec<TruncElem>;

impl LatticeSpace {
    pub fn new(field: Field, r: usize, level: usize) -> Self {
        LatticeSpace { ring: TruncRing::new(field, level), r }
    }

    pub fn ring(&self) -> &TruncRing {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn level(&self) -> usize {
        self.ring.level()
    }

    pub fn standard(&self) -> Lattice {
        self.from_parts(vec![0; self.r], vec![self.ring.zero(); self.r * (self.r - 1) / 2])
    }

    fn from_parts(&self, k: Vec<usize>, upper: Vec<TruncElem>) -> Lattice {
        Lattice { k, upper }
    }

    /// Builds a lattice from an already reduced normal form.
    pub fn from_normal_form(&self, k: Vec<usize>, upper: Vec<TruncElem>) -> Lattice {
        debug_assert_eq!(upper.len(), self.r * (self.r - 1) / 2);
        self.from_parts(k, upper)
    }

    /// `⊕ π^{c_i} 𝔬 e_i`.
    pub fn diagonal(&self, c: &[usize]) -> Lattice {
        self.from_parts(c.to_vec(), vec![self.ring.zero(); self.r * (self.r - 1) / 2])
    }

    /// Normal form of the span of `gens` (together with `π^M 𝔬^R`).
    pub fn span(&self, gens: &[Vector]) -> Result<Lattice> {
        let ring = &self.ring;
        let m = ring.level();
        let mut gens: Vec<Vector> = gens.iter().filter(|g| g.iter().any(|e| !e.is_zero())).cloned().collect();
        let mut cols: Vec<Vector> = vec![Vec::new(); self.r];
        let mut k = vec![0; self.r];
        for i in (0..self.r).rev() {
            let best = gens.iter().enumerate().min_by_key(|(_, g)| g[i].valuation()).map(|(p, g)| (p, g[i].valuation()));
            let Some((p, v)) = best.filter(|&(_, v)| v < m) else {
                return Err(Error::Invariant(format!("lattice does not contain π^{m} e_{i}; raise the precision")));
            };
            let pivot = gens.swap_remove(p);
            let unit = ring.shift_down(&pivot[i], v);
            let uinv = ring.inv(&unit)?;
            let pivot: Vector = pivot.iter().map(|e| ring.mul(e, &uinv)).collect();
            for g in gens.iter_mut() {
                if !g[i].is_zero() {
                    let c = ring.shift_down(&g[i], v);
                    for (x, y) in g.iter_mut().zip(&pivot) {
                        *x = ring.sub(x, &ring.mul(&c, y));
                    }
                }
            }
            gens.retain(|g| g.iter().any(|e| !e.is_zero()));
            k[i] = v;
            cols[i] = pivot;
        }
        // reduce above the diagonal, rows from the bottom up
        for j in 0..self.r {
            for i in (0..j).rev() {
                let e = &cols[j][i];
                let low = ring.truncate(e, k[i]);
                let c = ring.shift_down(&ring.sub(e, &low), k[i]);
                if !c.is_zero() {
                    let pivot = cols[i].clone();
                    for (x, y) in cols[j].iter_mut().zip(&pivot) {
                        *x = ring.sub(x, &ring.mul(&c, y));
                    }
                }
            }
        }
        let mut upper = Vec::with_capacity(self.r * (self.r - 1) / 2);
        for (i, &ki) in k.iter().enumerate() {
            for col in cols.iter().skip(i + 1) {
                upper.push(ring.truncate(&col[i], ki));
            }
        }
        Ok(self.from_parts(k, upper))
    }

    pub fn contains_vector(&self, l: &Lattice, v: &[TruncElem]) -> bool {
        let ring = &self.ring;
        let mut v = v.to_vec();
        for i in (0..self.r).rev() {
            if v[i].valuation() < l.k[i] {
                return false;
            }
            let c = ring.shift_down(&v[i], l.k[i]);
            if c.is_zero() {
                continue;
            }
            for (row, x) in v.iter_mut().enumerate().take(i + 1) {
                *x = ring.sub(x, &ring.mul(&c, &l.entry(ring, row, i)));
            }
        }
        true
    }

    /// `b ⊆ a`.
    pub fn contains(&self, a: &Lattice, b: &Lattice) -> bool {
        b.columns(&self.ring).iter().all(|c| self.contains_vector(a, c))
    }

    /// `π^s L`.
    pub fn scale(&self, l: &Lattice, s: usize) -> Result<Lattice> {
        if l.k.iter().any(|&k| k + s >= self.level()) {
            return Err(Error::Invariant("scaled lattice exceeds the working precision".into()));
        }
        let upper = l.upper.iter().map(|e| self.ring.shift_up(e, s)).collect();
        Ok(self.from_parts(l.k.iter().map(|&k| k + s).collect(), upper))
    }

    /// Whether `L ⊆ π 𝔬^R`.
    pub fn is_divisible(&self, l: &Lattice) -> bool {
        l.k.iter().all(|&k| k >= 1) && l.upper.iter().all(|e| e.valuation() >= 1)
    }

    /// The representative of the homothety class of `L` with `L ⊆ 𝔬^R` and
    /// `L ⊄ π 𝔬^R`.
    pub fn normalize(&self, l: &Lattice) -> Lattice {
        let mut l = l.clone();
        while self.is_divisible(&l) {
            l = self.from_parts(
                l.k.iter().map(|&k| k - 1).collect(),
                l.upper.iter().map(|e| self.ring.shift_down(e, 1)).collect(),
            );
        }
        l
    }

    pub fn mat_vec(&self, g: &TruncMatrix, v: &[TruncElem]) -> Vector {
        (0..self.r)
            .map(|i| {
                let mut s = self.ring.zero();
                for (j, x) in v.iter().enumerate() {
                    s = self.ring.add(&s, &self.ring.mul(g.get(i, j), x));
                }
                s
            })
            .collect()
    }

    /// `g L` for `g` with entries in `𝔬`.
    pub fn apply(&self, g: &TruncMatrix, l: &Lattice) -> Result<Lattice> {
        let cols: Vec<Vector> = l.columns(&self.ring).iter().map(|c| self.mat_vec(g, c)).collect();
        self.span(&cols)
    }

    /// Homothety class of `x L` for a monomial element `x = P_σ diag(π^{a})`.
    pub fn apply_monomial(&self, x: &AffineWeylElem, l: &Lattice) -> Result<Lattice> {
        let sigma = x.perm();
        let a = x.exponents();
        let shift = a.iter().copied().min().unwrap_or(0);
        let cols: Vec<Vector> = l
            .columns(&self.ring)
            .iter()
            .map(|c| {
                let mut out = vec![self.ring.zero(); self.r];
                for k in 0..self.r {
                    out[sigma[k]] = self.ring.shift_up(&c[k], (a[k] - shift) as usize);
                }
                out
            })
            .collect();
        Ok(self.normalize(&self.span(&cols)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(q: u32, r: usize) -> LatticeSpace {
        LatticeSpace::new(Field::new(q, 1).unwrap(), r, 8)
    }

    fn vec_of(s: &LatticeSpace, rows: &[&[Fe]]) -> Vector {
        rows.iter().map(|c| s.ring().from_coeffs(c)).collect()
    }

    #[test]
    fn span_reduces_to_normal_form() {
        let s = space(2, 2);
        // span{(1, π), (π, 0)}: index 2, exponents (1, 0)?
        let l = s.span(&[vec_of(&s, &[&[1], &[0, 1]]), vec_of(&s, &[&[0, 1], &[]])]).unwrap();
        assert_eq!(l.index(), 2);
        assert!(s.contains_vector(&l, &vec_of(&s, &[&[0, 0, 1], &[]])));
        assert!(!s.contains_vector(&l, &vec_of(&s, &[&[], &[0, 1]])));
        let again = s.span(&l.columns(s.ring())).unwrap();
        assert_eq!(l, again);
    }

    #[test]
    fn normal_form_is_independent_of_generators() {
        let s = space(3, 3);
        let a = vec_of(&s, &[&[1, 2], &[0, 1], &[2]]);
        let b = vec_of(&s, &[&[0, 1], &[1], &[0, 0, 1]]);
        let c = vec_of(&s, &[&[0, 0, 1], &[], &[]]);
        let sum: Vector = a.iter().zip(&b).map(|(x, y)| s.ring().add(x, y)).collect();
        let l1 = s.span(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let l2 = s.span(&[c, sum, a]).unwrap();
        assert_eq!(l1, l2);
        assert_eq!(l1.index(), 2);
    }

    #[test]
    fn scaling_and_normalizing() {
        let s = space(2, 2);
        let l = s.diagonal(&[1, 0]);
        let p = s.scale(&l, 2).unwrap();
        assert!(s.is_divisible(&p));
        assert_eq!(s.normalize(&p), l);
        assert!(s.contains(&s.standard(), &l));
        assert!(!s.contains(&l, &s.standard()));
    }

    #[test]
    fn monomial_action() {
        let s = space(2, 2);
        let x: AffineWeylElem = "w:2,1;d:1,0".parse().unwrap();
        // x e_0 = π e_1, x e_1 = e_0
        let l = s.apply_monomial(&x, &s.standard()).unwrap();
        assert_eq!(l, s.diagonal(&[0, 1]));
        let y: AffineWeylElem = "d:1,0".parse().unwrap();
        assert_eq!(s.apply_monomial(&y, &s.standard()).unwrap(), s.diagonal(&[1, 0]));
        let z: AffineWeylElem = "d:-1,0".parse().unwrap();
        assert_eq!(s.apply_monomial(&z, &s.standard()).unwrap(), s.diagonal(&[0, 1]));
    }
}
