//! Hom-dimension comparisons `dim Hom_{H(x)}(ρ, τ^x) = dim Hom_{U(𝔅₀)}(ρ, τ)`
//! over finite quotients, their parameter sweeps, and the internal
//! identities used to prove them.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::CycValue;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::glq::{cuspidal_indices, gl_order, group_bound, hom_dim, CharacterTable, LeviCharacter, SimilarityKey, TableCache};
use crate::intersection::{build_intersection, ClassLookup, Histogram, IntersectionModel, DEFAULT_QUOTIENT_BOUND};
use crate::orders::{
    condition_d_normalize, conjugate_pattern, intermediate_shapes, permutations, standard_order, standard_radical,
    weyl_representatives, AffineWeylElem, BlockShape, OrderPattern,
};

/// How a cell was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    /// Both Hom dimensions computed for one `τ`.
    Dimension,
    /// No character table of `𝕃_𝔅(F_q)` is available; the identity is checked
    /// for every `τ` at once by comparing `ρ`-weighted class sums of the
    /// `prB` images.
    ClassSum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaParams {
    pub q: u32,
    pub f: usize,
    pub e0: usize,
    pub shape: String,
    pub rho: usize,
    pub tau: Option<Vec<usize>>,
    pub x: String,
    pub mode: CheckMode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub params: LemmaParams,
    pub left: Option<i64>,
    pub right: Option<i64>,
    pub equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Shared state for all checks with fixed `(q, f, e_0)`.
pub struct LemmaEngine<'a> {
    cache: &'a TableCache,
    field: Field,
    f: usize,
    e0: usize,
    levi: Arc<CharacterTable>,
    bound: u64,
}

/// `x`-independent data for one intermediate shape.
pub struct ShapeData {
    pub shape: BlockShape,
    pub tables: Option<Vec<Arc<CharacterTable>>>,
    pub identity: IntersectionModel,
    pub identity_hist: Histogram,
    identity_keys: Option<Vec<Vec<SimilarityKey>>>,
}

impl<'a> LemmaEngine<'a> {
    pub fn new(cache: &'a TableCache, q: u32, f: usize, e0: usize) -> Result<Self> {
        if f == 0 || e0 == 0 {
            return Err(Error::InvalidArgument("f and e0 must be positive".into()));
        }
        let field = Field::new(q, 1).or_else(|_| field_of_order(q))?;
        let levi = cache.table(f, &field)?;
        Ok(LemmaEngine { cache, field, f, e0, levi, bound: DEFAULT_QUOTIENT_BOUND })
    }

    pub fn with_bound(mut self, bound: u64) -> Self {
        self.bound = bound;
        self
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Character table of `GL_f(F_q)`.
    pub fn levi_table(&self) -> &Arc<CharacterTable> {
        &self.levi
    }

    pub fn cuspidals(&self) -> Result<Vec<usize>> {
        cuspidal_indices(&self.levi)
    }

    pub fn shape_data(&self, shape: &BlockShape) -> Result<ShapeData> {
        let q = self.field.q() as u64;
        let tables = if shape.parts().iter().all(|&n| gl_order(n, q) <= group_bound()) {
            Some(shape.parts().iter().map(|&n| self.cache.table(n, &self.field)).collect::<Result<Vec<_>>>()?)
        } else {
            None
        };
        let identity = self.model(shape, &AffineWeylElem::identity(self.f, self.e0))?;
        let mut lookups = lookups_for(shape, &tables, &self.field);
        let identity_hist = identity.histogram(&mut lookups, None)?;
        let identity_keys = invariant_keys(&lookups);
        Ok(ShapeData { shape: shape.clone(), tables, identity, identity_hist, identity_keys })
    }

    pub fn model(&self, shape: &BlockShape, x: &AffineWeylElem) -> Result<IntersectionModel> {
        if x.f() != self.f || x.e0() != self.e0 {
            return Err(Error::ShapeMismatch(format!("{x} is not an element for f={} e0={}", self.f, self.e0)));
        }
        build_intersection(shape, x, self.levi.group().clone(), self.bound)
    }

    /// Values of `ρ = ρ₀^{⊗e_0}` on each histogram entry.
    fn rho_values(&self, rho0: usize, hist: &Histogram) -> Vec<CycValue> {
        hist.entries
            .iter()
            .map(|(c0, _, _)| {
                c0.iter().fold(CycValue::one(1), |acc, &c| acc.mul(self.levi.value(rho0, c as usize)))
            })
            .collect()
    }

    fn check_rho(&self, rho0: usize) -> Result<()> {
        if !self.cuspidals()?.contains(&rho0) {
            return Err(Error::InvalidArgument(format!("character {rho0} of GL_{} is not cuspidal", self.f)));
        }
        Ok(())
    }

    /// `dim Hom(ρ, τ ∘ prB)` over the histogram.
    fn dimension(&self, rho_vals: &[CycValue], hist: &Histogram, tau: &LeviCharacter) -> Result<i64> {
        let tau_vals: Vec<CycValue> = hist.entries.iter().map(|(_, cb, _)| tau.value(cb)).collect();
        hom_dim(hist.entries.iter().zip(rho_vals).zip(&tau_vals).map(|(((_, _, w), r), t)| (*w, r, t)), hist.order)
    }

    fn tau_character(&self, data: &ShapeData, tau: &[usize]) -> Result<LeviCharacter> {
        let tables = data
            .tables
            .as_ref()
            .ok_or_else(|| Error::SizeLimit { what: "Levi character table".into(), size: self.levi_size(&data.shape), bound: group_bound() })?;
        if tau.len() != tables.len() || tau.iter().zip(tables).any(|(&i, t)| i >= t.len()) {
            return Err(Error::InvalidArgument(format!("τ index {tau:?} does not fit shape {}", data.shape)));
        }
        Ok(LeviCharacter { factors: tables.iter().cloned().zip(tau.iter().copied()).collect() })
    }

    fn levi_size(&self, shape: &BlockShape) -> u64 {
        shape.parts().iter().map(|&n| gl_order(n, self.field.q() as u64)).max().unwrap_or(1)
    }

    fn params(&self, shape: &BlockShape, rho0: usize, tau: Option<&[usize]>, x: &AffineWeylElem, mode: CheckMode) -> LemmaParams {
        LemmaParams {
            q: self.field.q(),
            f: self.f,
            e0: self.e0,
            shape: shape.to_string(),
            rho: rho0,
            tau: tau.map(<[usize]>::to_vec),
            x: x.to_string(),
            mode,
        }
    }

    /// One comparison for an explicit `τ`.
    pub fn lemma_check(&self, data: &ShapeData, rho0: usize, tau: &[usize], x: &AffineWeylElem) -> Result<LemmaReport> {
        self.check_rho(rho0)?;
        let tau_char = self.tau_character(data, tau)?;
        let model = self.model(&data.shape, x)?;
        let mut lookups = lookups_for(&data.shape, &data.tables, &self.field);
        let hist = model.histogram(&mut lookups, None)?;
        let left = self.dimension(&self.rho_values(rho0, &hist), &hist, &tau_char)?;
        let right = self.dimension(&self.rho_values(rho0, &data.identity_hist), &data.identity_hist, &tau_char)?;
        Ok(LemmaReport {
            params: self.params(&data.shape, rho0, Some(tau), x, CheckMode::Dimension),
            left: Some(left),
            right: Some(right),
            equal: left == right,
            error: None,
        })
    }

    /// All reports for one `x`: every cuspidal `ρ₀` against every `τ`, or one
    /// class-sum report per `ρ₀` when `τ` cannot be tabulated.
    pub fn reports_for_x(&self, data: &ShapeData, x: &AffineWeylElem, taus: &[Vec<usize>]) -> Result<Vec<LemmaReport>> {
        let cusp = self.cuspidals()?;
        let model = self.model(&data.shape, x)?;
        let mut lookups = lookups_for(&data.shape, &data.tables, &self.field);
        let hist = model.histogram(&mut lookups, None)?;
        let mut out = Vec::new();
        for &rho0 in &cusp {
            let rv = self.rho_values(rho0, &hist);
            match &data.tables {
                Some(_) => {
                    let rv1 = self.rho_values(rho0, &data.identity_hist);
                    for tau in taus {
                        let tc = self.tau_character(data, tau)?;
                        let left = self.dimension(&rv, &hist, &tc)?;
                        let right = self.dimension(&rv1, &data.identity_hist, &tc)?;
                        out.push(LemmaReport {
                            params: self.params(&data.shape, rho0, Some(tau), x, CheckMode::Dimension),
                            left: Some(left),
                            right: Some(right),
                            equal: left == right,
                            error: None,
                        });
                    }
                }
                None => {
                    let keys = invariant_keys(&lookups).expect("invariant lookups");
                    let sx = class_sums(&hist, &rv, &keys);
                    let s1 = class_sums(
                        &data.identity_hist,
                        &self.rho_values(rho0, &data.identity_hist),
                        data.identity_keys.as_ref().expect("invariant lookups"),
                    );
                    out.push(LemmaReport {
                        params: self.params(&data.shape, rho0, None, x, CheckMode::ClassSum),
                        left: None,
                        right: None,
                        equal: class_sums_agree(&sx, hist.order, &s1, data.identity_hist.order),
                        error: None,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Recomputes the `x`-side of every report in `reports_for_x` with `prB`
    /// twisted by `A ↦ diag(c)^{-1} A diag(c)`, returning one flag per report
    /// saying whether the outcome is unchanged.
    pub fn scaled_agreement(
        &self,
        data: &ShapeData,
        x: &AffineWeylElem,
        reports: &[LemmaReport],
        scaling: &[Fe],
    ) -> Result<Vec<bool>> {
        let model = self.model(&data.shape, x)?;
        let mut lookups = lookups_for(&data.shape, &data.tables, &self.field);
        let hist = model.histogram(&mut lookups, Some(scaling))?;
        let mut base_lookups = lookups_for(&data.shape, &data.tables, &self.field);
        let base = model.histogram(&mut base_lookups, None)?;
        reports
            .iter()
            .map(|r| {
                let rho0 = r.params.rho;
                let rv = self.rho_values(rho0, &hist);
                match &r.params.tau {
                    Some(tau) => {
                        let tc = self.tau_character(data, tau)?;
                        Ok(Some(self.dimension(&rv, &hist, &tc)?) == r.left)
                    }
                    None => {
                        let sx = class_sums(&hist, &rv, &invariant_keys(&lookups).expect("invariant lookups"));
                        let s0 = class_sums(
                            &base,
                            &self.rho_values(rho0, &base),
                            &invariant_keys(&base_lookups).expect("invariant lookups"),
                        );
                        Ok(sx == s0)
                    }
                }
            })
            .collect()
    }

    /// All `τ` index tuples of `𝕃_𝔅(F_q)`, optionally only those with cuspidal
    /// support `ρ₀^{⊗e_0}` for some cuspidal `ρ₀`.
    pub fn taus(&self, data: &ShapeData, filter: TauFilter) -> Result<Vec<Vec<usize>>> {
        let Some(tables) = &data.tables else { return Ok(Vec::new()) };
        let mut all = vec![Vec::new()];
        for t in tables {
            all = all.into_iter().flat_map(|p| (0..t.len()).map(move |i| [p.clone(), vec![i]].concat())).collect();
        }
        if filter == TauFilter::All {
            return Ok(all);
        }
        let cusp = self.cuspidals()?;
        let mut keep = Vec::new();
        for tau in all {
            let tc = self.tau_character(data, &tau)?;
            let mut any = false;
            for &r in &cusp {
                let rho = LeviCharacter { factors: vec![(self.levi.clone(), r); self.e0] };
                any |= crate::glq::cuspidal_support_matches(self.cache, &tc, &rho)?;
            }
            if any {
                keep.push(tau);
            }
        }
        Ok(keep)
    }
}

fn field_of_order(q: u32) -> Result<Field> {
    let mut p = 2;
    while p <= q {
        if q.is_multiple_of(p) {
            let mut k = 0;
            let mut r = q;
            while r.is_multiple_of(p) {
                r /= p;
                k += 1;
            }
            if r == 1 {
                return Field::new(p, k);
            }
            break;
        }
        p += 1;
    }
    Err(Error::NotPrime(q))
}

/// Field with `q` elements, `q` a prime power.
pub fn field_with_order(q: u32) -> Result<Field> {
    field_of_order(q)
}

fn lookups_for(shape: &BlockShape, tables: &Option<Vec<Arc<CharacterTable>>>, field: &Field) -> Vec<ClassLookup> {
    match tables {
        Some(t) => t.iter().map(|t| ClassLookup::Table(t.group().clone())).collect(),
        None => shape.parts().iter().map(|&n| ClassLookup::invariant(n, field)).collect(),
    }
}

fn invariant_keys(lookups: &[ClassLookup]) -> Option<Vec<Vec<SimilarityKey>>> {
    lookups.iter().map(|l| l.keys().map(<[SimilarityKey]>::to_vec)).collect()
}

/// `S(C) = Σ_{prB(h) ∈ C} ρ(pr0 h)` keyed by similarity invariants.
fn class_sums(hist: &Histogram, rho_vals: &[CycValue], keys: &[Vec<SimilarityKey>]) -> BTreeMap<Vec<SimilarityKey>, CycValue> {
    let mut out: BTreeMap<Vec<SimilarityKey>, CycValue> = BTreeMap::new();
    for ((_, cb, w), rv) in hist.entries.iter().zip(rho_vals) {
        let key: Vec<SimilarityKey> = cb.iter().enumerate().map(|(b, &c)| keys[b][c as usize].clone()).collect();
        let t = rv.scale(*w as i64);
        match out.get_mut(&key) {
            Some(v) => v.add_assign(&t),
            None => {
                out.insert(key, t);
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `|H̄_1| S_x(C) = |H̄_x| S_1(C)` for every class `C`: the Hom identity for
/// all class functions `τ` simultaneously.
fn class_sums_agree(
    sx: &BTreeMap<Vec<SimilarityKey>, CycValue>,
    ox: u64,
    s1: &BTreeMap<Vec<SimilarityKey>, CycValue>,
    o1: u64,
) -> bool {
    let keys: HashSet<&Vec<SimilarityKey>> = sx.keys().chain(s1.keys()).collect();
    keys.into_iter().all(|k| {
        let a = sx.get(k).map(|v| v.scale(o1 as i64)).unwrap_or_else(|| CycValue::zero(1));
        let b = s1.get(k).map(|v| v.scale(ox as i64)).unwrap_or_else(|| CycValue::zero(1));
        a == b
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauFilter {
    All,
    SupportOnly,
}

/// One `(q, f, e_0)` block of a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepGrid {
    pub configs: Vec<(u32, usize, usize)>,
    pub bound: i64,
    /// Restrict to this shape (in units of `f`) when set.
    pub shape: Option<Vec<usize>>,
    pub taus: TauFilter,
}

impl SweepGrid {
    /// `q ∈ {2,3}`, `f ∈ {1,2}`, `e_0 ∈ {2,3}` with `f e_0 <= 4`, spread at most 2.
    pub fn default_grid() -> Self {
        let mut configs = Vec::new();
        for q in [2, 3] {
            for f in [1, 2] {
                for e0 in [2, 3] {
                    if f * e0 <= 4 {
                        configs.push((q, f, e0));
                    }
                }
            }
        }
        SweepGrid { configs, bound: 2, shape: None, taus: TauFilter::All }
    }
}

/// Condition-(D)-normalised representatives with spread at most `bound`,
/// deduplicated, in generation order.
pub fn normalized_representatives(e0: usize, f: usize, bound: i64, shape: &BlockShape) -> Result<Vec<AffineWeylElem>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in weyl_representatives(e0, f, bound) {
        if x.spread() > bound {
            continue;
        }
        let n = condition_d_normalize(&x, shape)?;
        if seen.insert(n.to_string()) {
            out.push(n);
        }
    }
    Ok(out)
}

/// A unit of sweep work: one model `(config, shape, x)`.
#[derive(Clone, Debug)]
pub struct SweepUnit {
    pub config: usize,
    pub shape: usize,
    pub x: AffineWeylElem,
}

pub struct SweepPlan<'a> {
    pub engines: Vec<LemmaEngine<'a>>,
    pub shapes: Vec<Vec<ShapeData>>,
    pub taus: Vec<Vec<Vec<Vec<usize>>>>,
    pub units: Vec<SweepUnit>,
}

pub fn plan_sweep<'a>(cache: &'a TableCache, grid: &SweepGrid) -> Result<SweepPlan<'a>> {
    let mut plan = SweepPlan { engines: Vec::new(), shapes: Vec::new(), taus: Vec::new(), units: Vec::new() };
    for (ci, &(q, f, e0)) in grid.configs.iter().enumerate() {
        let engine = LemmaEngine::new(cache, q, f, e0)?;
        let mut shapes = Vec::new();
        let mut taus = Vec::new();
        for shape in intermediate_shapes(e0, f) {
            if let Some(filter) = &grid.shape {
                if shape.in_units_of(f)? != *filter {
                    continue;
                }
            }
            for x in normalized_representatives(e0, f, grid.bound, &shape)? {
                plan.units.push(SweepUnit { config: ci, shape: shapes.len(), x });
            }
            let data = engine.shape_data(&shape)?;
            taus.push(engine.taus(&data, grid.taus)?);
            shapes.push(data);
        }
        plan.engines.push(engine);
        plan.shapes.push(shapes);
        plan.taus.push(taus);
    }
    Ok(plan)
}

impl SweepPlan<'_> {
    fn run_unit(&self, u: &SweepUnit) -> Vec<LemmaReport> {
        let engine = &self.engines[u.config];
        let data = &self.shapes[u.config][u.shape];
        match engine.reports_for_x(data, &u.x, &self.taus[u.config][u.shape]) {
            Ok(r) => r,
            Err(e) => vec![LemmaReport {
                params: engine.params(&data.shape, 0, None, &u.x, CheckMode::Dimension),
                left: None,
                right: None,
                equal: false,
                error: Some(e.to_string()),
            }],
        }
    }

    /// Runs every unit in parallel; reports are ordered by unit then by
    /// `(ρ₀, τ)`. Also returns per-unit wall times in milliseconds.
    pub fn run(&self) -> (Vec<LemmaReport>, Vec<u64>) {
        let results = self.run_grouped();
        let times = results.iter().map(|(_, t)| *t).collect();
        (results.into_iter().flat_map(|(r, _)| r).collect(), times)
    }

    /// Reports per unit, in unit order, with each unit's wall time.
    pub fn run_grouped(&self) -> Vec<(Vec<LemmaReport>, u64)> {
        self.units
            .par_iter()
            .map(|u| {
                let t = Instant::now();
                let r = self.run_unit(u);
                (r, t.elapsed().as_millis() as u64)
            })
            .collect()
    }

    /// Recomputes a seed-pinned sample of `fraction` of all cells with a
    /// random unit scaling per unit. Returns `(cell index, agrees)` pairs.
    pub fn scaled_sample(&self, reports: &[LemmaReport], fraction: f64, seed: u64) -> Result<Vec<(usize, bool)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut offset = 0;
        let mut jobs = Vec::new();
        for u in &self.units {
            let n = self.cell_count(u, reports, offset);
            let picked: Vec<usize> = (offset..offset + n).filter(|_| rng.gen_bool(fraction)).collect();
            let engine = &self.engines[u.config];
            let q = engine.field.q() as Fe;
            let scaling: Vec<Fe> = (0..u.x.r()).map(|_| rng.gen_range(1..q)).collect();
            if !picked.is_empty() {
                jobs.push((u, picked, scaling));
            }
            offset += n;
        }
        let results: Vec<Result<Vec<(usize, bool)>>> = jobs
            .par_iter()
            .map(|(u, picked, scaling)| {
                let engine = &self.engines[u.config];
                let data = &self.shapes[u.config][u.shape];
                let sample: Vec<LemmaReport> = picked.iter().map(|&i| reports[i].clone()).collect();
                let agree = engine.scaled_agreement(data, &u.x, &sample, scaling)?;
                Ok(picked.iter().copied().zip(agree).collect())
            })
            .collect();
        let mut out = Vec::new();
        for r in results {
            out.extend(r?);
        }
        Ok(out)
    }

    fn cell_count(&self, u: &SweepUnit, reports: &[LemmaReport], offset: usize) -> usize {
        let x = u.x.to_string();
        reports[offset..].iter().take_while(|r| r.params.x == x && r.params.shape == self.shapes[u.config][u.shape].shape.to_string() && r.params.f == self.engines[u.config].f && r.params.e0 == self.engines[u.config].e0 && r.params.q == self.engines[u.config].field.q()).count()
    }
}

/// Outcome of [`lemma_sweep`].
#[derive(Clone, Debug, Serialize)]
pub struct SweepOutcome {
    pub reports: Vec<LemmaReport>,
    pub cells: usize,
    pub failures: usize,
}

pub fn lemma_sweep(cache: &TableCache, grid: &SweepGrid) -> Result<SweepOutcome> {
    let plan = plan_sweep(cache, grid)?;
    let (reports, _) = plan.run();
    let failures = reports.iter().filter(|r| !r.equal).count();
    Ok(SweepOutcome { cells: reports.len(), failures, reports })
}

/// The three identities behind the Hom comparison, for one `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofChecks {
    /// `U¹(𝔅₀)^d ∩ U(𝔅) ⊆ U¹(𝔅₀)` on patterns.
    pub containment: bool,
    pub quotient_order: u64,
    pub reference_order: u64,
    /// Both quotients have the same order and the residue map onto strictly
    /// upper `f`-block matrices inside the `𝐧`-blocks is bijective on each.
    pub quotient: bool,
    /// `ρ^w = ρ` for every block permutation `w` and every cuspidal `ρ₀`.
    pub weyl_invariant: bool,
}

impl ProofChecks {
    pub fn all(&self) -> bool {
        self.containment && self.quotient && self.weyl_invariant
    }
}

/// Checks the proof identities for `x`, which should satisfy condition (D)
/// for `shape`.
pub fn proof_identity_checks(levi: &CharacterTable, e0: usize, shape: &BlockShape, x: &AffineWeylElem) -> Result<ProofChecks> {
    let f = levi.group().n();
    let field = levi.group().field();
    let r = f * e0;
    if x.r() != r || shape.r() != r || !shape.refines_blocks_of(f) {
        return Err(Error::ShapeMismatch(format!("{x} and {shape} do not match f={f} e0={e0}")));
    }
    let b0 = BlockShape::uniform(f, e0);
    let rad0 = standard_radical(&b0);
    let d_inv = x.diagonal_part().inverse();
    let rad0_d = conjugate_pattern(&rad0, &d_inv);
    let upper = crate::orders::intersect_patterns(&rad0_d, &standard_order(shape));
    let lower = crate::orders::intersect_patterns(&rad0_d, &standard_radical(shape));
    let containment = rad0.contains(&upper);

    let nblock = shape.block_of();
    let fblock: Vec<usize> = (0..r).map(|i| i / f).collect();
    let targets: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .filter(|&(i, j)| nblock[i] == nblock[j] && fblock[i] < fblock[j])
        .collect();
    let (qa, ba) = residue_bijection(field, &upper, &lower, &targets);
    let (qb, bb) = residue_bijection(field, &rad0, &standard_radical(shape), &targets);

    let mut weyl_invariant = true;
    let classes = levi.group().num_classes() as u32;
    let tuples = tuples(classes, e0);
    for rho0 in cuspidal_indices(levi)? {
        let value = |t: &[u32]| t.iter().fold(CycValue::one(1), |acc, &c| acc.mul(levi.value(rho0, c as usize)));
        for w in permutations(e0) {
            for t in &tuples {
                let permuted: Vec<u32> = w.iter().map(|&k| t[k]).collect();
                weyl_invariant &= value(t) == value(&permuted);
            }
        }
    }
    Ok(ProofChecks { containment, quotient_order: qa, reference_order: qb, quotient: qa == qb && ba && bb, weyl_invariant })
}

fn tuples(base: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|p| (0..base).map(move |c| [p.clone(), vec![c]].concat())).collect();
    }
    out
}

/// Enumerates `upper / lower` coordinate-wise and checks that reading the
/// constant terms at `targets` is a bijection onto `F_q^{targets}`.
fn residue_bijection(field: &Field, upper: &OrderPattern, lower: &OrderPattern, targets: &[(usize, usize)]) -> (u64, bool) {
    let r = upper.r();
    let mut slots = Vec::new();
    for i in 0..r {
        for j in 0..r {
            for t in upper.get(i, j)..lower.get(i, j) {
                slots.push((i, j, t));
            }
        }
    }
    let q = field.q() as u64;
    let order = q.pow(slots.len() as u32);
    let mut images = HashSet::new();
    for code in 0..order {
        let mut c = code;
        let mut image = vec![0u64; targets.len()];
        for &(i, j, t) in &slots {
            let v = c % q;
            c /= q;
            if t == 0 {
                if let Some(p) = targets.iter().position(|&ij| ij == (i, j)) {
                    image[p] = v;
                }
            }
        }
        images.insert(image);
    }
    let bijective = images.len() as u64 == order && order == q.pow(targets.len() as u32);
    (order, bijective)
}

/// Wall time of `f` in milliseconds.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_millis() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(cache: &TableCache, q: u32, f: usize, e0: usize) -> LemmaEngine<'_> {
        LemmaEngine::new(cache, q, f, e0).unwrap()
    }

    #[test]
    fn worked_cells_on_gl2_f2() {
        let cache = TableCache::new();
        let e = engine(&cache, 2, 1, 2);
        let data = e.shape_data(&BlockShape::new(vec![2]).unwrap()).unwrap();
        let t = data.tables.as_ref().unwrap()[0].clone();
        let x: AffineWeylElem = "d:0,1".parse().unwrap();
        let trivial = t.trivial();
        let std = t.degrees().iter().position(|&d| d == 2).unwrap();
        let sign = (0..t.len()).find(|&i| i != trivial && i != std).unwrap();
        for (tau, want) in [(trivial, 1), (std, 1), (sign, 0)] {
            let r = e.lemma_check(&data, 0, &[tau], &x).unwrap();
            assert_eq!((r.left, r.right, r.equal), (Some(want), Some(want), true), "τ = {tau}");
        }
    }

    #[test]
    fn right_side_is_the_induction_multiplicity() {
        let cache = TableCache::new();
        for (q, f, e0) in [(2, 1, 2), (3, 1, 2), (2, 1, 3), (2, 2, 2)] {
            let e = engine(&cache, q, f, e0);
            for shape in intermediate_shapes(e0, f) {
                let data = e.shape_data(&shape).unwrap();
                for tau in e.taus(&data, TauFilter::All).unwrap() {
                    let tc = e.tau_character(&data, &tau).unwrap();
                    for rho0 in e.cuspidals().unwrap() {
                        let rho = LeviCharacter { factors: vec![(e.levi.clone(), rho0); e0] };
                        let want = crate::glq::support_multiplicity(&cache, &tc, &rho).unwrap();
                        let id = AffineWeylElem::identity(f, e0);
                        let r = e.lemma_check(&data, rho0, &tau, &id).unwrap();
                        assert_eq!(r.right, Some(want));
                        assert_eq!(r.left, Some(want));
                    }
                }
            }
        }
    }

    #[test]
    fn small_sweep_has_expected_cells() {
        let cache = TableCache::new();
        let grid = SweepGrid { configs: vec![(2, 1, 2)], bound: 1, shape: None, taus: TauFilter::All };
        let out = lemma_sweep(&cache, &grid).unwrap();
        assert_eq!(out.failures, 0);
        let maximal = BlockShape::new(vec![2]).unwrap();
        let iwahori = BlockShape::new(vec![1, 1]).unwrap();
        // GL_2(F_2) has 3 irreducibles and GL_1(F_2)^2 is trivial.
        let want = 3 * normalized_representatives(2, 1, 1, &maximal).unwrap().len()
            + normalized_representatives(2, 1, 1, &iwahori).unwrap().len();
        assert_eq!(out.cells, want);
        let empty = SweepGrid { configs: vec![], ..grid };
        assert_eq!(lemma_sweep(&cache, &empty).unwrap().cells, 0);
    }

    #[test]
    fn order_two_character_constituents() {
        let cache = TableCache::new();
        let e = engine(&cache, 3, 1, 2);
        let rho0 = (0..e.levi.len()).find(|&i| e.levi.value(i, 1) != &CycValue::one(1)).unwrap();
        let data = e.shape_data(&BlockShape::new(vec![2]).unwrap()).unwrap();
        let mut hits = 0;
        for tau in e.taus(&data, TauFilter::All).unwrap() {
            let reports: Vec<LemmaReport> = normalized_representatives(2, 1, 1, &data.shape)
                .unwrap()
                .iter()
                .map(|x| e.lemma_check(&data, rho0, &tau, x).unwrap())
                .collect();
            assert!(reports.iter().all(|r| r.equal));
            if reports[0].right == Some(1) {
                hits += 1;
            }
        }
        assert_eq!(hits, 2);
    }

    #[test]
    fn normalization_does_not_change_dimensions() {
        let cache = TableCache::new();
        let e = engine(&cache, 2, 1, 3);
        for shape in intermediate_shapes(3, 1) {
            let data = e.shape_data(&shape).unwrap();
            let taus = e.taus(&data, TauFilter::All).unwrap();
            for x in weyl_representatives(3, 1, 1) {
                let n = condition_d_normalize(&x, &shape).unwrap();
                for tau in &taus {
                    let a = e.lemma_check(&data, 0, tau, &x).unwrap();
                    let b = e.lemma_check(&data, 0, tau, &n).unwrap();
                    assert_eq!(a.left, b.left, "{x} vs {n} on {shape}");
                }
            }
        }
    }

    #[test]
    fn proof_checks_examples() {
        let cache = TableCache::new();
        let levi = cache.table(1, &Field::new(2, 1).unwrap()).unwrap();
        let maximal = BlockShape::new(vec![2]).unwrap();
        let d = AffineWeylElem::diagonal(1, vec![2, 0]);
        let c = proof_identity_checks(&levi, 2, &maximal, &d).unwrap();
        assert!(c.all());
        assert_eq!((c.quotient_order, c.reference_order), (2, 2));
        for shape in intermediate_shapes(3, 1) {
            for x in normalized_representatives(3, 1, 2, &shape).unwrap() {
                assert!(proof_identity_checks(&levi, 3, &shape, &x).unwrap().all(), "{x} on {shape}");
            }
        }
    }
}
