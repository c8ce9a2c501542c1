//! Per-orbit Hom dimensions for depth-zero coefficient systems.
//!
//! For a face `σ` of the standard chamber containing the standard vertex
//! (an intermediate order `𝔅₀ ⊆ 𝔅 ⊆ 𝔅_max`) and `x ∈ W̃(𝔅₀)`, the
//! `U(𝔅₀)`-orbit of `xσ` carries the module induced from the stabiliser of
//! `xσ`. Its Hom space against the inflation `λ` of `ρ = ρ₀^{⊗e_0}` is
//! computed from the orbit and its transporters by the induced character
//! formula, and compared with the sum of the Hom dimensions over
//! `U(𝔅₀) ∩ U(𝔅)^x` predicted by the finite-quotient lemma.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use super::lattice::{Lattice, LatticeSpace};
use crate::cyclo::CycValue;
use crate::error::{Error, Result};
use crate::field::{TruncMatrix, TruncRing};
use crate::glq::{cuspidal_support_matches, hom_dim, CharacterTable, FqMat, LeviCharacter, TableCache};
use crate::intersection::IntersectionModel;
use crate::lemma::{LemmaEngine, ShapeData};
use crate::orders::{standard_order, AffineWeylElem, BlockShape};

/// Depth-zero coefficient data: `ρ₀` and the list `(τ_i)` of irreducibles of
/// `𝕃_𝔅(F_q)` with cuspidal support `ρ₀^{⊗e_0}`.
#[derive(Clone, Debug)]
pub struct DepthZeroSpec {
    pub rho0: usize,
    pub shape: BlockShape,
    pub taus: Vec<Vec<usize>>,
    characters: Vec<LeviCharacter>,
}

impl DepthZeroSpec {
    /// Rejects any `τ_i` whose cuspidal support is not `ρ₀^{⊗e_0}`.
    pub fn new(engine: &LemmaEngine<'_>, cache: &TableCache, data: &ShapeData, rho0: usize, taus: Vec<Vec<usize>>) -> Result<Self> {
        let levi = engine.levi_table();
        if !engine.cuspidals()?.contains(&rho0) {
            return Err(Error::InvalidArgument(format!("ρ₀ = {rho0} is not cuspidal")));
        }
        let tables = data
            .tables
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("no character table for the Levi of {}", data.shape)))?;
        let e0 = data.shape.r() / levi.group().n();
        let rho = LeviCharacter { factors: vec![(levi.clone(), rho0); e0] };
        let mut characters = Vec::new();
        for tau in &taus {
            if tau.len() != tables.len() || tau.iter().zip(tables).any(|(&i, t)| i >= t.len()) {
                return Err(Error::InvalidArgument(format!("τ index {tau:?} does not fit shape {}", data.shape)));
            }
            let c = LeviCharacter { factors: tables.iter().cloned().zip(tau.iter().copied()).collect() };
            if !cuspidal_support_matches(cache, &c, &rho)? {
                return Err(Error::InvalidArgument(format!("τ = {tau:?} does not have cuspidal support ρ₀^{e0}")));
            }
            characters.push(c);
        }
        Ok(DepthZeroSpec { rho0, shape: data.shape.clone(), taus, characters })
    }

    /// Every `τ` with cuspidal support `ρ₀^{⊗e_0}`.
    pub fn full(engine: &LemmaEngine<'_>, cache: &TableCache, data: &ShapeData, rho0: usize) -> Result<Self> {
        let all = engine.taus(data, crate::lemma::TauFilter::All)?;
        let e0 = data.shape.r() / engine.levi_table().group().n();
        let rho = LeviCharacter { factors: vec![(engine.levi_table().clone(), rho0); e0] };
        let tables = data.tables.as_ref().ok_or_else(|| Error::InvalidArgument("no Levi character table".into()))?;
        let mut keep = Vec::new();
        for tau in all {
            let c = LeviCharacter { factors: tables.iter().cloned().zip(tau.iter().copied()).collect() };
            if cuspidal_support_matches(cache, &c, &rho)? {
                keep.push(tau);
            }
        }
        Self::new(engine, cache, data, rho0, keep)
    }

    /// `dim λ_i(σ)`: at depth zero the inducing subgroup is all of `U(𝔅)`, so
    /// this is the degree of `τ_i`.
    pub fn module_dimensions(&self) -> Vec<i64> {
        self.characters.iter().map(LeviCharacter::degree).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitParams {
    pub q: u32,
    pub f: usize,
    pub e0: usize,
    pub shape: String,
    pub rho: usize,
    pub taus: Vec<Vec<usize>>,
    pub x: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub params: OrbitParams,
    /// Hom dimension from the orbit and the induced character formula.
    pub left: i64,
    /// Sum of the lemma's Hom dimensions.
    pub right: i64,
    pub equal: bool,
    pub orbit_size: u64,
    pub predicted_orbit_size: u64,
    pub stabilizer_fixes: bool,
}

/// The lattice chain of the face of the standard chamber with order `𝔅`:
/// `M_b = span{e_i : block(i) <= b} + π 𝔬^R`.
pub fn standard_face(space: &LatticeSpace, shape: &BlockShape) -> Vec<Lattice> {
    let blocks = shape.block_of();
    (0..shape.e())
        .map(|b| {
            let c: Vec<usize> = blocks.iter().map(|&k| usize::from(k > b)).collect();
            space.normalize(&space.diagonal(&c))
        })
        .collect()
}

fn act(space: &LatticeSpace, g: &TruncMatrix, simplex: &[Lattice]) -> Result<Vec<Lattice>> {
    let mut out: Vec<Lattice> = simplex.iter().map(|l| Ok(space.normalize(&space.apply(g, l)?))).collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

/// Orbit of `simplex` under the group generated by `gens`, with one
/// transporter per orbit element, in discovery order.
pub fn orbit(space: &LatticeSpace, gens: &[TruncMatrix], simplex: &[Lattice]) -> Result<Vec<(Vec<Lattice>, TruncMatrix)>> {
    let ring = space.ring();
    let mut start = simplex.to_vec();
    start.sort();
    let mut seen: HashMap<Vec<Lattice>, usize> = HashMap::new();
    let mut out = vec![(start.clone(), TruncMatrix::identity(ring, space.rank()))];
    seen.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (s, g) = out[i].clone();
        for h in gens {
            let t = act(space, h, &s)?;
            if !seen.contains_key(&t) {
                seen.insert(t.clone(), out.len());
                queue.push_back(out.len());
                out.push((t, h.mul(ring, &g)));
            }
        }
    }
    Ok(out)
}

/// Generators of `U(𝔅₀)` modulo `1 + π^depth M_R(𝔬)`: the Levi
/// `GL_f(F_q)^{e_0}` placed block by block, elementary matrices
/// `1 + c π^t E_ij` with `t` at least the order's valuation, and diagonal
/// one-units.
pub fn parahoric_generators(ring: &TruncRing, levi: &CharacterTable, e0: usize, depth: usize) -> Vec<TruncMatrix> {
    let f = levi.group().n();
    let r = f * e0;
    let field = ring.field();
    let pattern = standard_order(&BlockShape::uniform(f, e0));
    let basis = field.additive_basis();
    let mut gens = Vec::new();
    for b in 0..e0 {
        for idx in 0..levi.group().order() as u32 {
            let g = levi.group().element(idx);
            let mut m = TruncMatrix::identity(ring, r);
            for i in 0..f {
                for j in 0..f {
                    m.set(b * f + i, b * f + j, ring.constant(g.get(i, j)));
                }
            }
            gens.push(m);
        }
    }
    for i in 0..r {
        for j in 0..r {
            let lo = if i == j { 1 } else { pattern.get(i, j) as usize };
            for t in lo..depth {
                for &c in &basis {
                    let mut m = TruncMatrix::identity(ring, r);
                    let cur = m.get(i, j).clone();
                    m.set(i, j, ring.add(&cur, &ring.monomial(c, t)));
                    gens.push(m);
                }
            }
        }
    }
    gens
}

fn residue(m: &TruncMatrix) -> FqMat {
    FqMat { n: m.dim, e: m.residue() }
}

fn lift(ring: &TruncRing, m: &TruncMatrix) -> TruncMatrix {
    TruncMatrix::from_fn(m.dim, |i, j| ring.from_coeffs(&m.get(i, j).coeffs))
}

/// Compares the orbit-side Hom dimension with the lemma's prediction.
pub fn orbit_dimension_check(
    engine: &LemmaEngine<'_>,
    data: &ShapeData,
    spec: &DepthZeroSpec,
    x: &AffineWeylElem,
) -> Result<OrbitReport> {
    let levi = engine.levi_table().clone();
    let field = engine.field().clone();
    let f = levi.group().n();
    let e0 = x.e0();
    let r = x.r();
    let depth = x.spread() as usize + 2;
    let space = LatticeSpace::new(field.clone(), r, (r + 2) * (depth + 1));
    let ring = space.ring().clone();
    let model = engine.model(&data.shape, x)?;

    let face = standard_face(&space, &data.shape);
    let translate: Vec<Lattice> = face.iter().map(|l| space.apply_monomial(x, l)).collect::<Result<_>>()?;
    let gens = parahoric_generators(&ring, &levi, e0, depth);
    let orbit = orbit(&space, &gens, &translate)?;
    let predicted = orbit_index(&model, f, e0, field.q() as u64);

    let tables = data.tables.as_ref().ok_or_else(|| Error::InvalidArgument("no Levi character table".into()))?;
    let elements = quotient_elements(&model, &ring, tables)?;
    let mut sorted = translate.clone();
    sorted.sort();
    let mut stabilizer_fixes = true;
    for (h, _) in &elements {
        stabilizer_fixes &= act(&space, h, &translate)? == sorted;
    }

    // χ_W(h) = Σ_i τ_i(prB h); λ(g h g^{-1}) = ρ(pr0(ḡ h̄ ḡ^{-1})).
    let chi_w: Vec<CycValue> = elements
        .iter()
        .map(|(_, tau_classes)| {
            spec.characters.iter().fold(CycValue::zero(1), |acc, c| acc.add(&c.value(tau_classes)))
        })
        .collect();
    let rho_of = |m: &FqMat| -> Result<CycValue> {
        let mut v = CycValue::one(1);
        for b in 0..e0 {
            let mut blk = FqMat::zero(f);
            for i in 0..f {
                for j in 0..f {
                    blk.set(i, j, m.get(b * f + i, b * f + j));
                }
            }
            let cls = levi.group().class_of_matrix(&blk).ok_or_else(|| Error::Invariant("non-invertible Levi part".into()))?;
            v = v.mul(levi.value(spec.rho0, cls as usize));
        }
        Ok(v)
    };
    let mut terms: Vec<(CycValue, CycValue)> = Vec::with_capacity(orbit.len() * elements.len());
    for (_, g) in &orbit {
        let gbar = residue(g);
        let ginv = gbar.inverse(&field).ok_or_else(|| Error::Invariant("transporter is not a unit".into()))?;
        for ((h, _), chi) in elements.iter().zip(&chi_w) {
            let conj = gbar.mul(&field, &residue(h)).mul(&field, &ginv);
            terms.push((chi.clone(), rho_of(&conj)?));
        }
    }
    let total = orbit.len() as u64 * elements.len() as u64;
    let left = hom_dim(terms.iter().map(|(a, b)| (1, a, b)), total)?;

    let mut right = 0;
    for tau in &spec.taus {
        right += engine.lemma_check(data, spec.rho0, tau, x)?.left.expect("dimension mode");
    }
    let orbit_size = orbit.len() as u64;
    Ok(OrbitReport {
        params: OrbitParams {
            q: field.q(),
            f,
            e0,
            shape: data.shape.to_string(),
            rho: spec.rho0,
            taus: spec.taus.clone(),
            x: x.to_string(),
        },
        left,
        right,
        equal: left == right && orbit_size == predicted && stabilizer_fixes,
        orbit_size,
        predicted_orbit_size: predicted,
        stabilizer_fixes,
    })
}

/// `[U(𝔅₀) : H(x)] = q^{Σ (v_H - v_𝔅₀)}`.
fn orbit_index(model: &IntersectionModel, f: usize, e0: usize, q: u64) -> u64 {
    let base = standard_order(&BlockShape::uniform(f, e0));
    let h = model.pattern_h();
    let r = f * e0;
    let mut exp = 0;
    for i in 0..r {
        for j in 0..r {
            exp += h.get(i, j) - base.get(i, j);
        }
    }
    q.pow(exp as u32)
}

/// Representatives of `H(x)/K` as matrices, with their `prB` class tuples
/// in the groups underlying `tables`.
fn quotient_elements(
    model: &IntersectionModel,
    ring: &TruncRing,
    tables: &[Arc<CharacterTable>],
) -> Result<Vec<(TruncMatrix, Vec<u32>)>> {
    let mring = model.ring();
    let mut out = Vec::new();
    model.for_each(|levi, vals| {
        let m = lift(ring, &model.element_matrix(&mring, levi, vals));
        let classes = model
            .prb_blocks(levi, vals, None)
            .iter()
            .zip(tables)
            .map(|(b, t)| t.group().class_of_matrix(b).ok_or_else(|| Error::Invariant("prB is not invertible".into())))
            .collect::<Result<Vec<u32>>>()?;
        out.push((m, classes));
        Ok(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glq::support_multiplicity;
    use crate::lemma::LemmaEngine;
    use crate::orders::{intermediate_shapes, weyl_representatives};

    #[test]
    fn worked_example_gl2_f2() {
        let cache = TableCache::new();
        let engine = LemmaEngine::new(&cache, 2, 1, 2).unwrap();
        let data = engine.shape_data(&BlockShape::new(vec![2]).unwrap()).unwrap();
        let t = data.tables.as_ref().unwrap()[0].clone();
        let trivial = t.trivial();
        let std = t.degrees().iter().position(|&d| d == 2).unwrap();
        let spec = DepthZeroSpec::new(&engine, &cache, &data, 0, vec![vec![trivial], vec![std]]).unwrap();
        assert_eq!(spec.module_dimensions(), vec![1, 2]);
        let x: AffineWeylElem = "d:1,0".parse().unwrap();
        let r = orbit_dimension_check(&engine, &data, &spec, &x).unwrap();
        assert_eq!((r.left, r.right), (2, 2));
        assert!(r.equal, "{r:?}");
        let sign = (0..t.len()).find(|&i| i != trivial && i != std).unwrap();
        assert!(DepthZeroSpec::new(&engine, &cache, &data, 0, vec![vec![sign]]).is_err());
    }

    #[test]
    fn identity_gives_iwahori_multiplicities() {
        let cache = TableCache::new();
        for (q, e0) in [(2, 2), (3, 2), (2, 3)] {
            let engine = LemmaEngine::new(&cache, q, 1, e0).unwrap();
            for shape in intermediate_shapes(e0, 1) {
                let data = engine.shape_data(&shape).unwrap();
                for rho0 in engine.cuspidals().unwrap() {
                    let spec = DepthZeroSpec::full(&engine, &cache, &data, rho0).unwrap();
                    let rho = LeviCharacter { factors: vec![(engine.levi_table().clone(), rho0); e0] };
                    let want: i64 = spec.characters.iter().map(|c| support_multiplicity(&cache, c, &rho).unwrap()).sum();
                    let r = orbit_dimension_check(&engine, &data, &spec, &AffineWeylElem::identity(1, e0)).unwrap();
                    assert_eq!((r.left, r.right, r.orbit_size), (want, want, 1));
                }
            }
        }
    }

    #[test]
    fn orbits_match_for_small_translates() {
        let cache = TableCache::new();
        let engine = LemmaEngine::new(&cache, 2, 1, 3).unwrap();
        for shape in intermediate_shapes(3, 1) {
            let data = engine.shape_data(&shape).unwrap();
            let spec = DepthZeroSpec::full(&engine, &cache, &data, 0).unwrap();
            for x in weyl_representatives(3, 1, 1).into_iter().filter(|x| x.spread() <= 1) {
                let r = orbit_dimension_check(&engine, &data, &spec, &x).unwrap();
                assert!(r.equal, "{r:?}");
            }
        }
    }
}
