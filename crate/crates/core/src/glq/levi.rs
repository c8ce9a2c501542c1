//! Levi characters, cuspidality, parabolic induction and Hom dimensions.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::chartable::{character_table, CharacterTable, ClassFunction};
use super::group::{conjugacy_classes, GLGroup};
use super::matrix::FqMat;
use crate::cyclo::{lcm, CycValue};
use crate::error::{Error, Result};
use crate::field::Field;

/// Shared, lazily built character tables keyed by `(n, p, k)`.
#[derive(Default)]
pub struct TableCache {
    tables: Mutex<HashMap<(usize, u32, u32), Arc<CharacterTable>>>,
    parabolics: Mutex<HashMap<(usize, usize, u32, u32), Arc<ParabolicHistogram>>>,
}

impl TableCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn table(&self, n: usize, field: &Field) -> Result<Arc<CharacterTable>> {
        let key = (n, field.p(), field.k());
        if let Some(t) = self.tables.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(character_table(Arc::new(conjugacy_classes(n, field)?))?);
        t.verify()?;
        Ok(self.tables.lock().unwrap().entry(key).or_insert(t).clone())
    }

    /// Histogram of the standard parabolic of `GL_n` with Levi `GL_f^{n/f}`.
    pub fn parabolic(&self, n: usize, f: usize, field: &Field) -> Result<Arc<ParabolicHistogram>> {
        let key = (n, f, field.p(), field.k());
        if let Some(h) = self.parabolics.lock().unwrap().get(&key) {
            return Ok(h.clone());
        }
        let big = self.table(n, field)?;
        let small = self.table(f, field)?;
        let h = Arc::new(ParabolicHistogram::new(big.group(), small.group(), n / f)?);
        Ok(self.parabolics.lock().unwrap().entry(key).or_insert(h).clone())
    }
}

/// `(1/|H|) Σ_h w_h · χ(h) · conj ψ(h)` over weighted terms; must be a
/// non-negative rational integer.
pub fn hom_dim<'a>(terms: impl IntoIterator<Item = (u64, &'a CycValue, &'a CycValue)>, order: u64) -> Result<i64> {
    let mut acc: Option<CycValue> = None;
    for (w, chi, psi) in terms {
        let t = chi.mul(&psi.conj()).scale(w as i64);
        match &mut acc {
            Some(a) => a.add_assign(&t),
            None => acc = Some(t),
        }
    }
    let acc = acc.unwrap_or_else(|| CycValue::zero(1));
    let n = acc
        .div_exact(order as i64)
        .and_then(|v| v.as_integer())
        .ok_or_else(|| Error::Invariant(format!("Hom dimension {acc} / {order} is not an integer")))?;
    if n < 0 {
        return Err(Error::Invariant(format!("negative Hom dimension {n}")));
    }
    Ok(n)
}

/// Compositions of `n` into at least two positive parts.
pub fn proper_compositions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0..(1u32 << (n - 1)) {
        if mask == 0 {
            continue;
        }
        let mut parts = Vec::new();
        let mut cur = 1;
        for i in 0..n - 1 {
            if mask & (1 << i) != 0 {
                parts.push(cur);
                cur = 1;
            } else {
                cur += 1;
            }
        }
        parts.push(cur);
        out.push(parts);
    }
    out
}

fn block_index(composition: &[usize]) -> Vec<usize> {
    composition.iter().enumerate().flat_map(|(b, &len)| std::iter::repeat_n(b, len)).collect()
}

/// Class counts over the unipotent radical of the standard (upper block
/// triangular) parabolic with the given composition.
pub fn unipotent_class_counts(g: &GLGroup, composition: &[usize]) -> Vec<u64> {
    let n = g.n();
    let f = g.field();
    let q = f.q() as usize;
    let blocks = block_index(composition);
    let free: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| blocks[i] < blocks[j]).collect();
    let mut counts = vec![0u64; g.num_classes()];
    let total = q.pow(free.len() as u32);
    let mut u = FqMat::identity(n);
    for code in 0..total {
        let mut c = code;
        for &(i, j) in &free {
            u.set(i, j, (c % q) as u8);
            c /= q;
        }
        counts[g.class_of_matrix(&u).expect("unipotent element lies in the group") as usize] += 1;
    }
    counts
}

/// Dimension of the `U`-fixed vectors of `chi` for every proper standard parabolic.
pub fn unipotent_fixed_dims(table: &CharacterTable, chi: &ClassFunction) -> Result<Vec<(Vec<usize>, i64)>> {
    let g = table.group();
    let one = CycValue::one(1);
    proper_compositions(g.n())
        .into_iter()
        .map(|comp| {
            let counts = unipotent_class_counts(g, &comp);
            let total: u64 = counts.iter().sum();
            let d = hom_dim(counts.iter().enumerate().map(|(k, &w)| (w, &chi.values[k], &one)), total)?;
            Ok((comp, d))
        })
        .collect()
}

/// True iff `chi` has no nonzero vectors fixed by the unipotent radical of any
/// proper standard parabolic subgroup.
pub fn is_cuspidal(table: &CharacterTable, chi: &ClassFunction) -> Result<bool> {
    Ok(unipotent_fixed_dims(table, chi)?.iter().all(|&(_, d)| d == 0))
}

/// Number of cuspidal irreducibles of `GL_n(F_q)`: Frobenius orbits of
/// length `n` on the characters of `F_{q^n}^×`,
/// `(1/n) Σ_{d | n} μ(d) (q^{n/d} - 1)`.
pub fn cuspidal_count(n: usize, q: u64) -> u64 {
    fn mobius(mut d: usize) -> i64 {
        let mut sign = 1;
        let mut p = 2;
        while p * p <= d {
            if d.is_multiple_of(p) {
                d /= p;
                if d.is_multiple_of(p) {
                    return 0;
                }
                sign = -sign;
            }
            p += 1;
        }
        if d > 1 {
            sign = -sign;
        }
        sign
    }
    let total: i64 = (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| mobius(d) * (q.pow((n / d) as u32) as i64 - 1)).sum();
    (total / n as i64) as u64
}

pub fn cuspidal_indices(table: &CharacterTable) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, chi) in table.irreducibles().iter().enumerate() {
        if is_cuspidal(table, chi)? {
            out.push(i);
        }
    }
    Ok(out)
}

/// Counts of `(Levi class tuple, class in GL_n)` over the standard parabolic
/// `P = L ⋉ U` of `GL_n` with `L = GL_f^k`.
#[derive(Debug)]
pub struct ParabolicHistogram {
    pub order: u64,
    pub counts: Vec<(Vec<u32>, u32, u64)>,
}

impl ParabolicHistogram {
    pub fn new(big: &GLGroup, small: &GLGroup, k: usize) -> Result<Self> {
        let f = small.n();
        let n = big.n();
        if f * k != n {
            return Err(Error::ShapeMismatch(format!("{k} blocks of size {f} do not fill {n}")));
        }
        let field = big.field();
        let q = field.q() as usize;
        let blocks = block_index(&vec![f; k]);
        let free: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| blocks[i] < blocks[j]).collect();
        let nu = q.pow(free.len() as u32);
        let small_order = small.order() as usize;
        let mut hist: HashMap<(Vec<u32>, u32), u64> = HashMap::new();
        let mut levi_idx = vec![0usize; k];
        loop {
            let mut m = FqMat::zero(n);
            for (b, &e) in levi_idx.iter().enumerate() {
                let x = small.element(e as u32);
                for i in 0..f {
                    for j in 0..f {
                        m.set(b * f + i, b * f + j, x.get(i, j));
                    }
                }
            }
            let levi_classes: Vec<u32> = levi_idx.iter().map(|&e| small.class_of(e as u32)).collect();
            for code in 0..nu {
                let mut c = code;
                let mut p = m.clone();
                let mut u = FqMat::identity(n);
                for &(i, j) in &free {
                    u.set(i, j, (c % q) as u8);
                    c /= q;
                }
                if nu > 1 {
                    p = m.mul(field, &u);
                }
                let cls = big.class_of_matrix(&p).expect("parabolic element lies in the group");
                *hist.entry((levi_classes.clone(), cls)).or_default() += 1;
            }
            // next Levi tuple
            let mut pos = 0;
            while pos < k {
                levi_idx[pos] += 1;
                if levi_idx[pos] < small_order {
                    break;
                }
                levi_idx[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
        let order = (small.order()).pow(k as u32) * nu as u64;
        let mut counts: Vec<(Vec<u32>, u32, u64)> = hist.into_iter().map(|((l, c), w)| (l, c, w)).collect();
        counts.sort();
        Ok(ParabolicHistogram { order, counts })
    }

    /// `⟨Ind_P^G infl ρ, τ⟩ = |P|^{-1} Σ_p ρ(levi p) conj τ(p)`.
    pub fn multiplicity(&self, rho: &[&ClassFunction], tau: &ClassFunction) -> Result<i64> {
        let mut m = tau.values[0].order();
        for r in rho {
            m = lcm(m, r.values[0].order());
        }
        let values: Vec<(u64, CycValue, CycValue)> = self
            .counts
            .iter()
            .map(|(levi, cls, w)| {
                let mut v = CycValue::one(m);
                for (b, &c) in levi.iter().enumerate() {
                    v = v.mul(&rho[b].values[c as usize]);
                }
                (*w, v, tau.values[*cls as usize].clone())
            })
            .collect();
        hom_dim(values.iter().map(|(w, a, b)| (*w, a, b)), self.order)
    }
}

/// A character of `Π GL_{n_i}(F_q)`: one irreducible per factor.
#[derive(Clone, Debug)]
pub struct LeviCharacter {
    pub factors: Vec<(Arc<CharacterTable>, usize)>,
}

impl LeviCharacter {
    pub fn shape(&self) -> Vec<usize> {
        self.factors.iter().map(|(t, _)| t.group().n()).collect()
    }

    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|(t, i)| t.irreducibles()[*i].degree()).product()
    }

    /// Value on a tuple of factor classes.
    pub fn value(&self, classes: &[u32]) -> CycValue {
        let mut v = CycValue::one(1);
        for ((t, i), &c) in self.factors.iter().zip(classes) {
            v = v.mul(t.value(*i, c as usize));
        }
        v
    }
}

/// Whether `τ` (on `Π GL_{n_i}`) has cuspidal support `ρ` (on `GL_f^{e_0}`):
/// `⟨Ind_P(infl ρ), τ⟩ > 0` for the standard parabolic `P` with Levi `GL_f^{e_0}`.
pub fn cuspidal_support_matches(cache: &TableCache, tau: &LeviCharacter, rho: &LeviCharacter) -> Result<bool> {
    Ok(support_multiplicity(cache, tau, rho)? > 0)
}

pub fn support_multiplicity(cache: &TableCache, tau: &LeviCharacter, rho: &LeviCharacter) -> Result<i64> {
    let rho_shape = rho.shape();
    let f = *rho_shape.first().ok_or_else(|| Error::ShapeMismatch("empty cuspidal datum".into()))?;
    if rho_shape.iter().any(|&x| x != f) {
        return Err(Error::ShapeMismatch("cuspidal datum must have equal block sizes".into()));
    }
    let tau_shape = tau.shape();
    if tau_shape.iter().sum::<usize>() != f * rho_shape.len() || tau_shape.iter().any(|&n| n % f != 0) {
        return Err(Error::ShapeMismatch(format!("{tau_shape:?} is not refined by {rho_shape:?}")));
    }
    let mut mult = 1;
    let mut offset = 0;
    for (t, i) in &tau.factors {
        let n = t.group().n();
        let k = n / f;
        let field = t.group().field().clone();
        let hist = cache.parabolic(n, f, &field)?;
        let rho_slice: Vec<&ClassFunction> =
            rho.factors[offset..offset + k].iter().map(|(rt, ri)| &rt.irreducibles()[*ri]).collect();
        mult *= hist.multiplicity(&rho_slice, &t.irreducibles()[*i])?;
        offset += k;
    }
    Ok(mult)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions() {
        assert_eq!(proper_compositions(1).len(), 0);
        assert_eq!(proper_compositions(3).len(), 3);
        assert_eq!(proper_compositions(4).len(), 7);
    }

    #[test]
    fn gl2_f2_cuspidal_is_the_sign() {
        let cache = TableCache::new();
        let t = cache.table(2, &Field::new(2, 1).unwrap()).unwrap();
        let cusp = cuspidal_indices(&t).unwrap();
        assert_eq!(cusp.len(), 1);
        assert_eq!(t.irreducibles()[cusp[0]].degree(), 1);
        let triv = t.trivial();
        assert!(!is_cuspidal(&t, &t.irreducibles()[triv]).unwrap());
    }

    #[test]
    fn principal_series_support() {
        let cache = TableCache::new();
        let f = Field::new(2, 1).unwrap();
        let g2 = cache.table(2, &f).unwrap();
        let g1 = cache.table(1, &f).unwrap();
        let rho = LeviCharacter { factors: vec![(g1.clone(), 0), (g1.clone(), 0)] };
        let support: Vec<bool> = (0..3)
            .map(|i| cuspidal_support_matches(&cache, &LeviCharacter { factors: vec![(g2.clone(), i)] }, &rho).unwrap())
            .collect();
        let degrees = g2.degrees();
        for (i, s) in support.iter().enumerate() {
            // trivial and the 2-dimensional character lie in Ind(1); the sign does not
            let is_sign = degrees[i] == 1 && i != g2.trivial();
            assert_eq!(*s, !is_sign);
        }
    }
}
