//! The finite quotient `H̄ = H(x)/K` of `H(x) = U(𝔅₀) ∩ U(𝔅)^x`, where
//! `K = U¹(𝔅₀) ∩ U¹(𝔅)^x`, enumerated as a structured product together with
//! its two Levi projections.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Fe, Field, TruncMatrix, TruncRing};
use crate::glq::{monic_irreducibles, similarity_key, FqMat, GLGroup, SimilarityKey};
use crate::orders::{
    conjugate_pattern, intersect_patterns, standard_order, standard_radical, AffineWeylElem, BlockShape, OrderPattern,
};

pub const DEFAULT_QUOTIENT_BOUND: u64 = 10_000_000;

/// Where an entry of `prB(h)` is read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Source {
    Zero,
    /// Residue of the `(r, c)` entry of the Levi factor in `f`-block `block`.
    Levi { block: usize, r: usize, c: usize },
    /// Index into the free slots.
    Slot(usize),
}

/// One free coordinate `π^t` at matrix position `(i, j)`, outside the
/// `f`-diagonal blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub i: usize,
    pub j: usize,
    pub t: usize,
}

#[derive(Debug)]
pub struct IntersectionModel {
    field: Field,
    shape_b: BlockShape,
    x: AffineWeylElem,
    pattern_h: OrderPattern,
    pattern_k: OrderPattern,
    level: usize,
    slots: Vec<Slot>,
    levi_group: Arc<GLGroup>,
    levi_mats: Vec<FqMat>,
    prb_sources: Vec<Vec<Source>>,
}

/// Builds the model for `𝔅₀ = (f, …, f) ⊆ 𝔅 = shape_b` and `x`.
/// `levi_group` must be `GL_f(F_q)`.
pub fn build_intersection(
    shape_b: &BlockShape,
    x: &AffineWeylElem,
    levi_group: Arc<GLGroup>,
    bound: u64,
) -> Result<IntersectionModel> {
    let field = levi_group.field().clone();
    let f = x.f();
    let e0 = x.e0();
    let r = x.r();
    if levi_group.n() != f {
        return Err(Error::ShapeMismatch(format!("Levi factor GL_{} for block size {f}", levi_group.n())));
    }
    if shape_b.r() != r || !shape_b.refines_blocks_of(f) {
        return Err(Error::ShapeMismatch(format!("shape {shape_b} is not a union of {e0} blocks of size {f}")));
    }
    let b0 = BlockShape::uniform(f, e0);
    let pattern_h = intersect_patterns(&standard_order(&b0), &conjugate_pattern(&standard_order(shape_b), x));
    let pattern_k = intersect_patterns(
        &intersect_patterns(&pattern_h, &standard_radical(&b0)),
        &conjugate_pattern(&standard_radical(shape_b), x),
    );
    let fblock: Vec<usize> = (0..r).map(|i| i / f).collect();

    let mut slots = Vec::new();
    let mut exponent_sum = 0u32;
    for i in 0..r {
        for j in 0..r {
            let (lo, hi) = (pattern_h.get(i, j), pattern_k.get(i, j));
            if lo < 0 || hi < lo {
                return Err(Error::Invariant(format!("bad valuation range [{lo}, {hi}) at ({i}, {j})")));
            }
            if fblock[i] == fblock[j] {
                if (lo, hi) != (0, 1) {
                    return Err(Error::Invariant(format!("diagonal block entry ({i}, {j}) has range [{lo}, {hi})")));
                }
                continue;
            }
            for t in lo..hi {
                slots.push(Slot { i, j, t: t as usize });
            }
            exponent_sum += (hi - lo) as u32;
        }
    }
    let levi_order = levi_group.order().pow(e0 as u32);
    let predicted = (field.q() as u64)
        .checked_pow(exponent_sum)
        .and_then(|u| u.checked_mul(levi_order))
        .unwrap_or(u64::MAX);
    if predicted > bound {
        return Err(Error::SizeLimit { what: "intersection quotient".into(), size: predicted, bound });
    }
    let level = (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).map(|(i, j)| pattern_k.get(i, j)).max().unwrap_or(1).max(1)
        as usize;

    // prB(h)_{IJ} is the coefficient of π^{a_I - a_J} in h_{σI, σJ}.
    let sigma = x.perm();
    let a = x.exponents();
    let offsets = shape_b.offsets();
    let mut prb_sources = Vec::new();
    for (k, &nk) in shape_b.parts().iter().enumerate() {
        let mut src = Vec::with_capacity(nk * nk);
        for ii in 0..nk {
            for jj in 0..nk {
                let (gi, gj) = (offsets[k] + ii, offsets[k] + jj);
                let (si, sj) = (sigma[gi], sigma[gj]);
                let t = a[gi] - a[gj];
                let (lo, hi) = (pattern_h.get(si, sj), pattern_k.get(si, sj));
                let s = if t < lo {
                    Source::Zero
                } else if t >= hi {
                    return Err(Error::Invariant(format!(
                        "prB reads π^{t} at ({si}, {sj}) beyond the kernel cutoff {hi}"
                    )));
                } else if fblock[si] == fblock[sj] {
                    Source::Levi { block: fblock[si], r: si % f, c: sj % f }
                } else {
                    let idx = slots.iter().position(|s| (s.i, s.j, s.t as i64) == (si, sj, t)).unwrap();
                    Source::Slot(idx)
                };
                src.push(s);
            }
        }
        prb_sources.push(src);
    }
    let levi_mats = (0..levi_group.order() as u32).map(|e| levi_group.element(e)).collect();
    Ok(IntersectionModel {
        field,
        shape_b: shape_b.clone(),
        x: x.clone(),
        pattern_h,
        pattern_k,
        level,
        slots,
        levi_group,
        levi_mats,
        prb_sources,
    })
}

/// Identifies conjugacy classes of one `GL_n(F_q)` factor of `𝕃_𝔅`, either
/// through a fully enumerated group or through similarity invariants.
pub enum ClassLookup {
    Table(Arc<GLGroup>),
    Invariant { field: Field, irreducibles: Vec<Vec<Fe>>, memo: HashMap<u64, u32>, keys: Vec<SimilarityKey> },
}

impl ClassLookup {
    pub fn invariant(n: usize, field: &Field) -> Self {
        ClassLookup::Invariant {
            field: field.clone(),
            irreducibles: monic_irreducibles(field, n),
            memo: HashMap::new(),
            keys: Vec::new(),
        }
    }

    pub fn class(&mut self, m: &FqMat) -> Result<u32> {
        match self {
            ClassLookup::Table(g) => {
                g.class_of_matrix(m).ok_or_else(|| Error::Invariant("projection is not invertible".into()))
            }
            ClassLookup::Invariant { field, irreducibles, memo, keys } => {
                let packed = m.pack(field.q());
                if let Some(&id) = memo.get(&packed) {
                    return Ok(id);
                }
                if !m.is_invertible(field) {
                    return Err(Error::Invariant("projection is not invertible".into()));
                }
                let key = similarity_key(field, m, irreducibles);
                let id = match keys.iter().position(|k| *k == key) {
                    Some(p) => p as u32,
                    None => {
                        keys.push(key);
                        keys.len() as u32 - 1
                    }
                };
                memo.insert(packed, id);
                Ok(id)
            }
        }
    }

    /// Similarity invariants indexed by class id, for invariant lookups.
    pub fn keys(&self) -> Option<&[SimilarityKey]> {
        match self {
            ClassLookup::Table(_) => None,
            ClassLookup::Invariant { keys, .. } => Some(keys),
        }
    }
}

/// Counts of `(pr0 class tuple, prB class tuple)` over `H̄`.
#[derive(Clone, Debug)]
pub struct Histogram {
    pub order: u64,
    pub entries: Vec<(Vec<u32>, Vec<u32>, u64)>,
}

impl IntersectionModel {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn shape_b(&self) -> &BlockShape {
        &self.shape_b
    }

    pub fn x(&self) -> &AffineWeylElem {
        &self.x
    }

    pub fn pattern_h(&self) -> &OrderPattern {
        &self.pattern_h
    }

    pub fn pattern_k(&self) -> &OrderPattern {
        &self.pattern_k
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn levi_group(&self) -> &Arc<GLGroup> {
        &self.levi_group
    }

    fn f(&self) -> usize {
        self.x.f()
    }

    fn e0(&self) -> usize {
        self.x.e0()
    }

    /// `|GL_f(F_q)|^{e_0} · q^{#slots}`.
    pub fn predicted_order(&self) -> u64 {
        self.levi_group.order().pow(self.e0() as u32) * (self.field.q() as u64).pow(self.slots.len() as u32)
    }

    /// Visits every element of `H̄` as (Levi element indices, slot values).
    pub fn for_each(&self, mut visit: impl FnMut(&[u32], &[Fe]) -> Result<()>) -> Result<()> {
        let e0 = self.e0();
        let lo = self.levi_group.order() as u32;
        let q = self.field.q() as Fe;
        let mut levi = vec![0u32; e0];
        let mut vals = vec![0 as Fe; self.slots.len()];
        loop {
            vals.iter_mut().for_each(|v| *v = 0);
            loop {
                visit(&levi, &vals)?;
                if !increment(&mut vals, q) {
                    break;
                }
            }
            if !increment_u32(&mut levi, lo) {
                break;
            }
        }
        Ok(())
    }

    /// The element with the given coordinates as a matrix over `F_q[π]/π^M`.
    pub fn element_matrix(&self, ring: &TruncRing, levi: &[u32], vals: &[Fe]) -> TruncMatrix {
        let f = self.f();
        let r = self.x.r();
        let mut m = TruncMatrix::zero(ring, r);
        for (b, &e) in levi.iter().enumerate() {
            let g = &self.levi_mats[e as usize];
            for i in 0..f {
                for j in 0..f {
                    m.set(b * f + i, b * f + j, ring.constant(g.get(i, j)));
                }
            }
        }
        for (s, &v) in self.slots.iter().zip(vals) {
            let cur = m.get(s.i, s.j).clone();
            m.set(s.i, s.j, ring.add(&cur, &ring.monomial(v, s.t)));
        }
        m
    }

    pub fn ring(&self) -> TruncRing {
        TruncRing::new(self.field.clone(), self.level)
    }

    /// Residues of the `f`-diagonal blocks of any `h ∈ H(x)`.
    pub fn pr0_of_matrix(&self, h: &TruncMatrix) -> Vec<FqMat> {
        let f = self.f();
        (0..self.e0())
            .map(|b| {
                let mut g = FqMat::zero(f);
                for i in 0..f {
                    for j in 0..f {
                        g.set(i, j, h.get(b * f + i, b * f + j).coeffs[0]);
                    }
                }
                g
            })
            .collect()
    }

    /// Blocks of `x^{-1} h x` reduced modulo `π`, for any `h ∈ H(x)`.
    pub fn prb_of_matrix(&self, h: &TruncMatrix) -> Vec<FqMat> {
        let sigma = self.x.perm();
        let a = self.x.exponents();
        let offsets = self.shape_b.offsets();
        self.shape_b
            .parts()
            .iter()
            .enumerate()
            .map(|(k, &nk)| {
                let mut g = FqMat::zero(nk);
                for i in 0..nk {
                    for j in 0..nk {
                        let (gi, gj) = (offsets[k] + i, offsets[k] + j);
                        let t = a[gi] - a[gj];
                        if t >= 0 && (t as usize) < self.level {
                            g.set(i, j, h.get(sigma[gi], sigma[gj]).coeffs[t as usize]);
                        }
                    }
                }
                g
            })
            .collect()
    }

    /// `prB` of an enumerated element, optionally composed with the
    /// alternative identification `A ↦ diag(c)^{-1} A diag(c)`.
    pub fn prb_blocks(&self, levi: &[u32], vals: &[Fe], scaling: Option<&[Fe]>) -> Vec<FqMat> {
        let fld = &self.field;
        let offsets = self.shape_b.offsets();
        self.prb_sources
            .iter()
            .enumerate()
            .map(|(k, src)| {
                let nk = self.shape_b.parts()[k];
                let mut g = FqMat::zero(nk);
                for (idx, s) in src.iter().enumerate() {
                    let mut v = match *s {
                        Source::Zero => 0,
                        Source::Levi { block, r, c } => self.levi_mats[levi[block] as usize].get(r, c),
                        Source::Slot(i) => vals[i],
                    };
                    if let (Some(c), true) = (scaling, v != 0) {
                        let (i, j) = (offsets[k] + idx / nk, offsets[k] + idx % nk);
                        v = fld.mul(fld.mul(fld.inv(c[i]).unwrap(), c[j]), v);
                    }
                    g.e[idx] = v;
                }
                g
            })
            .collect()
    }

    /// Tabulates `(class of pr0, class of prB)` over all of `H̄`.
    pub fn histogram(&self, lookups: &mut [ClassLookup], scaling: Option<&[Fe]>) -> Result<Histogram> {
        if lookups.len() != self.shape_b.e() {
            return Err(Error::ShapeMismatch("one class lookup per block of 𝔅 is required".into()));
        }
        let mut counts: HashMap<(Vec<u32>, Vec<u32>), u64> = HashMap::new();
        let mut total = 0u64;
        let mut rho_classes: Vec<u32> = Vec::new();
        let mut last_levi: Vec<u32> = Vec::new();
        self.for_each(|levi, vals| {
            if levi != last_levi.as_slice() {
                last_levi = levi.to_vec();
                rho_classes = levi.iter().map(|&e| self.levi_group.class_of(e)).collect();
            }
            let blocks = self.prb_blocks(levi, vals, scaling);
            let mut tau_classes = Vec::with_capacity(blocks.len());
            for (b, l) in blocks.iter().zip(lookups.iter_mut()) {
                tau_classes.push(l.class(b)?);
            }
            *counts.entry((rho_classes.clone(), tau_classes)).or_default() += 1;
            total += 1;
            Ok(())
        })?;
        if total != self.predicted_order() {
            return Err(Error::Invariant(format!("enumerated {total} elements, predicted {}", self.predicted_order())));
        }
        let mut entries: Vec<(Vec<u32>, Vec<u32>, u64)> = counts.into_iter().map(|((a, b), c)| (a, b, c)).collect();
        entries.sort();
        Ok(Histogram { order: total, entries })
    }

    /// Checks on (a sample of) pairs that products stay in the pattern of
    /// `H(x)` and that `pr0` and `prB` are multiplicative. Returns the number
    /// of pairs checked.
    pub fn check_homomorphisms(&self, max_pairs: usize) -> Result<usize> {
        let ring = self.ring();
        let mut elems = Vec::new();
        self.for_each(|levi, vals| {
            elems.push((levi.to_vec(), vals.to_vec()));
            Ok(())
        })?;
        let n = elems.len();
        let total_pairs = n.saturating_mul(n);
        let stride = total_pairs.div_ceil(max_pairs.max(1)).max(1);
        let mats: Vec<TruncMatrix> = elems.iter().map(|(l, v)| self.element_matrix(&ring, l, v)).collect();
        let fld = &self.field;
        let mut checked = 0;
        let mut p = 0usize;
        while p < total_pairs {
            let (i, j) = (p / n, p % n);
            let (a, b) = (&mats[i], &mats[j]);
            let ab = a.mul(&ring, b);
            for r in 0..ab.dim {
                for c in 0..ab.dim {
                    if ab.get(r, c).valuation() < self.pattern_h.get(r, c) as usize {
                        return Err(Error::Invariant(format!("product leaves the pattern of H at ({r}, {c})")));
                    }
                }
            }
            let mul_all = |x: Vec<FqMat>, y: Vec<FqMat>| -> Vec<FqMat> {
                x.iter().zip(&y).map(|(u, v)| u.mul(fld, v)).collect()
            };
            if self.pr0_of_matrix(&ab) != mul_all(self.pr0_of_matrix(a), self.pr0_of_matrix(b)) {
                return Err(Error::Invariant("pr0 is not multiplicative".into()));
            }
            if self.prb_of_matrix(&ab) != mul_all(self.prb_of_matrix(a), self.prb_of_matrix(b)) {
                return Err(Error::Invariant("prB is not multiplicative".into()));
            }
            let (li, vi) = &elems[i];
            if self.prb_of_matrix(a) != self.prb_blocks(li, vi, None) {
                return Err(Error::Invariant("prB read from coordinates disagrees with the matrix".into()));
            }
            checked += 1;
            p += stride;
        }
        Ok(checked)
    }
}

fn increment(digits: &mut [Fe], base: Fe) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn increment_u32(digits: &mut [u32], base: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glq::conjugacy_classes;

    fn gl(n: usize, q: u32) -> Arc<GLGroup> {
        Arc::new(conjugacy_classes(n, &Field::new(q, 1).unwrap()).unwrap())
    }

    #[test]
    fn identity_gives_the_borel() {
        let g1 = gl(1, 2);
        let shape = BlockShape::new(vec![2]).unwrap();
        let m = build_intersection(&shape, &AffineWeylElem::identity(1, 2), g1, DEFAULT_QUOTIENT_BOUND).unwrap();
        assert_eq!(m.pattern_h(), &standard_order(&BlockShape::uniform(1, 2)));
        assert_eq!(m.predicted_order(), 2);
        let mut lookups = vec![ClassLookup::Table(gl(2, 2))];
        let h = m.histogram(&mut lookups, None).unwrap();
        assert_eq!(h.order, 2);
        m.check_homomorphisms(100).unwrap();
    }

    #[test]
    fn diagonal_x_gives_lower_triangular_reduction() {
        let shape = BlockShape::new(vec![2]).unwrap();
        let x = AffineWeylElem::diagonal(1, vec![0, 1]);
        let m = build_intersection(&shape, &x, gl(1, 2), DEFAULT_QUOTIENT_BOUND).unwrap();
        assert_eq!(m.pattern_h(), &standard_order(&BlockShape::uniform(1, 2)));
        let mut seen_lower = false;
        m.for_each(|l, v| {
            let b = &m.prb_blocks(l, v, None)[0];
            assert_eq!(b.get(0, 1), 0);
            seen_lower |= b.get(1, 0) != 0;
            Ok(())
        })
        .unwrap();
        assert!(seen_lower);
        m.check_homomorphisms(100).unwrap();
    }

    #[test]
    fn homomorphisms_on_larger_models() {
        for (q, f, e0, parts, b) in [
            (2, 1, 3, vec![3], vec![1, -1, 0]),
            (3, 1, 3, vec![2, 1], vec![2, 0, 0]),
            (2, 2, 2, vec![4], vec![1, 0]),
            (2, 1, 3, vec![1, 2], vec![-2, 1, 0]),
        ] {
            let shape = BlockShape::new(parts).unwrap();
            for w in crate::orders::permutations(e0) {
                let x = AffineWeylElem::new(f, w, b.clone()).unwrap();
                let m = build_intersection(&shape, &x, gl(f, q), DEFAULT_QUOTIENT_BOUND).unwrap();
                m.check_homomorphisms(3000).unwrap();
            }
        }
    }
}
