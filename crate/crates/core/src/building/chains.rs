//! Oriented chains with values in a coefficient system, the boundary map and
//! the augmentation.

use std::collections::BTreeMap;

use serde::Serialize;

use super::complex::TruncatedComplex;
use crate::error::{Error, Result};

/// A finitely supported integer vector, keyed by basis index.
pub type Coeff = BTreeMap<usize, i64>;

/// Coefficient spaces `V[σ]` with inclusions `V[τ] ⊆ V[σ]` for `σ ⊆ τ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientSystem {
    /// `V[σ] = ℤ` (basis index 0).
    Constant,
    /// `V[σ]` is spanned by the vertices equal or adjacent to every vertex of `σ`.
    Star,
}

impl CoefficientSystem {
    /// Basis of `V[σ]`.
    pub fn basis(&self, complex: &TruncatedComplex, simplex: &[usize]) -> Vec<usize> {
        match self {
            CoefficientSystem::Constant => vec![0],
            CoefficientSystem::Star => (0..complex.vertices().len())
                .filter(|&w| simplex.iter().all(|&v| v == w || complex.adjacent(v, w)))
                .collect(),
        }
    }

    pub fn contains(&self, complex: &TruncatedComplex, simplex: &[usize], value: &Coeff) -> bool {
        match self {
            CoefficientSystem::Constant => value.keys().all(|&k| k == 0),
            CoefficientSystem::Star => {
                value.keys().all(|&w| simplex.iter().all(|&v| v == w || complex.adjacent(v, w)))
            }
        }
    }
}

/// Sorts `vertices` and returns the sign of the sorting permutation.
pub fn canonical(vertices: &[usize]) -> (Vec<usize>, i64) {
    let mut v = vertices.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (v, sign)
}

fn add_into(target: &mut Coeff, value: &Coeff, factor: i64) {
    for (&k, &x) in value {
        let e = target.entry(k).or_insert(0);
        *e += factor * x;
        if *e == 0 {
            target.remove(&k);
        }
    }
}

/// An alternating, finitely supported function on oriented `degree`-simplices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OrientedChain {
    degree: usize,
    /// Values on simplices in increasing vertex order.
    values: BTreeMap<Vec<usize>, Coeff>,
}

impl OrientedChain {
    pub fn zero(degree: usize) -> Self {
        OrientedChain { degree, values: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Vec<usize>, &Coeff)> {
        self.values.iter()
    }

    /// Adds `value` on the oriented simplex `⟨vertices⟩`.
    pub fn add(
        &mut self,
        complex: &TruncatedComplex,
        system: CoefficientSystem,
        vertices: &[usize],
        value: &Coeff,
    ) -> Result<()> {
        if vertices.len() != self.degree + 1 || !complex.is_simplex(vertices) {
            return Err(Error::InvalidArgument(format!("{vertices:?} is not a {}-simplex", self.degree)));
        }
        let (key, sign) = canonical(vertices);
        if !system.contains(complex, &key, value) {
            return Err(Error::InvalidArgument(format!("value is not in the coefficient space of {key:?}")));
        }
        self.add_unchecked(key, value, sign);
        Ok(())
    }

    fn add_unchecked(&mut self, key: Vec<usize>, value: &Coeff, factor: i64) {
        let slot = self.values.entry(key.clone()).or_default();
        add_into(slot, value, factor);
        if slot.is_empty() {
            self.values.remove(&key);
        }
    }

    /// `ω(⟨vertices⟩)`, with the sign of the orientation.
    pub fn get(&self, vertices: &[usize]) -> Coeff {
        let (key, sign) = canonical(vertices);
        let mut out = Coeff::new();
        if let Some(v) = self.values.get(&key) {
            add_into(&mut out, v, sign);
        }
        out
    }
}

/// `(∂ω)(⟨σ_0,…,σ_{q-1}⟩) = Σ_σ ω(⟨σ, σ_0,…,σ_{q-1}⟩)`, the coefficient
/// spaces being included into those of faces.
pub fn boundary(complex: &TruncatedComplex, omega: &OrientedChain) -> Result<OrientedChain> {
    let top = complex.rank() - 1;
    if omega.degree == 0 || omega.degree > top {
        return Err(Error::LevelOutOfRange { level: omega.degree, max: top });
    }
    let mut out = OrientedChain::zero(omega.degree - 1);
    for (s, value) in &omega.values {
        for i in 0..s.len() {
            // moving s[i] to the front is a permutation of sign (-1)^i
            let face: Vec<usize> = s.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, &v)| v).collect();
            out.add_unchecked(face, value, if i % 2 == 0 { 1 } else { -1 });
        }
    }
    Ok(out)
}

/// `ε(ω) = Σ_v ω(v)`.
pub fn augmentation(omega: &OrientedChain) -> Result<Coeff> {
    if omega.degree != 0 {
        return Err(Error::LevelOutOfRange { level: omega.degree, max: 0 });
    }
    let mut out = Coeff::new();
    for v in omega.values.values() {
        add_into(&mut out, v, 1);
    }
    Ok(out)
}

/// Outcome of the simplicial identity checks on one truncation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SimplicialChecks {
    pub vertices: usize,
    pub simplices: Vec<usize>,
    /// Basis chains on which `∂∂` was evaluated, and how many gave zero.
    pub boundary_squared: (usize, usize),
    pub augmentation: (usize, usize),
    pub orientation: (usize, usize),
    /// `(pairs checked, pairs agreeing)` for `v ∈ σ ⟺ order(σ) fixes v`.
    pub dictionary_fixed: (usize, usize),
    /// `(faces checked, faces agreeing)` for `σ ⊊ τ ⟹ order(τ) ⊊ order(σ)`.
    pub dictionary_faces: (usize, usize),
}

impl SimplicialChecks {
    pub fn passed(&self) -> bool {
        [self.boundary_squared, self.augmentation, self.orientation, self.dictionary_fixed, self.dictionary_faces]
            .iter()
            .all(|(n, ok)| n == ok)
    }
}

fn basis_chain(complex: &TruncatedComplex, system: CoefficientSystem, s: &[usize], w: usize) -> Result<OrientedChain> {
    let mut c = OrientedChain::zero(s.len() - 1);
    c.add(complex, system, s, &Coeff::from([(w, 1)]))?;
    Ok(c)
}

/// `∂∂ = 0` on every basis chain of degree at least 2 and `ε∂ = 0` on every
/// basis 1-chain, for `system`; the orientation rule on every simplex.
pub fn check_chain_identities(complex: &TruncatedComplex, system: CoefficientSystem, out: &mut SimplicialChecks) -> Result<()> {
    for d in 2..=complex.dimension() {
        for s in complex.simplices(d) {
            for w in system.basis(complex, s) {
                let c = basis_chain(complex, system, s, w)?;
                out.boundary_squared.0 += 1;
                out.boundary_squared.1 += usize::from(boundary(complex, &boundary(complex, &c)?)?.is_zero());
            }
        }
    }
    for s in complex.simplices(1) {
        for w in system.basis(complex, s) {
            let c = basis_chain(complex, system, s, w)?;
            out.augmentation.0 += 1;
            out.augmentation.1 += usize::from(augmentation(&boundary(complex, &c)?)?.is_empty());
        }
    }
    for d in 1..=complex.dimension() {
        for s in complex.simplices(d) {
            let w = system.basis(complex, s)[0];
            let value = Coeff::from([(w, 3)]);
            for perm in crate::orders::permutations(s.len()) {
                let oriented: Vec<usize> = perm.iter().map(|&i| s[i]).collect();
                let mut c = OrientedChain::zero(d);
                c.add(complex, system, &oriented, &value)?;
                let (_, sign) = canonical(&oriented);
                out.orientation.0 += 1;
                let ok = c.get(s) == Coeff::from([(w, 3 * sign)]) && c.get(&oriented) == value;
                out.orientation.1 += usize::from(ok);
            }
        }
    }
    Ok(())
}

/// Inclusion reversal of the simplex-to-order dictionary: every order fixes
/// exactly the vertices of its simplex, and shrinks strictly along faces.
pub fn check_dictionary(complex: &TruncatedComplex, out: &mut SimplicialChecks) -> Result<()> {
    let n = complex.vertices().len();
    for d in 0..=complex.dimension() {
        for s in complex.simplices(d) {
            let order = complex.simplex_order(s)?;
            for v in 0..n {
                let fixed = complex.order_stabilizes(&order, &[complex.vertices()[v].clone()])?;
                out.dictionary_fixed.0 += 1;
                out.dictionary_fixed.1 += usize::from(fixed == s.contains(&v));
            }
            if d > 0 {
                let chain = complex.chain(s)?;
                for i in 0..s.len() {
                    let face: Vec<usize> = s.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, &v)| v).collect();
                    let face_order = complex.simplex_order(&face)?;
                    let face_chain = complex.chain(&face)?;
                    let smaller = complex.order_stabilizes(&order, &face_chain)?;
                    let strict = !complex.order_stabilizes(&face_order, &chain)?;
                    out.dictionary_faces.0 += 1;
                    out.dictionary_faces.1 += usize::from(smaller && strict);
                }
            }
        }
    }
    Ok(())
}

/// All simplicial checks on one truncation, for both coefficient systems.
pub fn simplicial_checks(complex: &TruncatedComplex) -> Result<SimplicialChecks> {
    let mut out = SimplicialChecks {
        vertices: complex.vertices().len(),
        simplices: (0..=complex.dimension()).map(|d| complex.simplices(d).len()).collect(),
        ..Default::default()
    };
    for system in [CoefficientSystem::Constant, CoefficientSystem::Star] {
        check_chain_identities(complex, system, &mut out)?;
    }
    check_dictionary(complex, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::truncated_building;
    use crate::field::Field;

    #[test]
    fn triangle_boundary() {
        let c = truncated_building(3, &Field::new(2, 1).unwrap(), 1).unwrap();
        let t = c.simplices(2)[0].clone();
        let mut w = OrientedChain::zero(2);
        w.add(&c, CoefficientSystem::Constant, &t, &Coeff::from([(0, 1)])).unwrap();
        let b = boundary(&c, &w).unwrap();
        assert_eq!(b.get(&[t[1], t[2]]), Coeff::from([(0, 1)]));
        assert_eq!(b.get(&[t[0], t[2]]), Coeff::from([(0, -1)]));
        assert_eq!(b.get(&[t[0], t[1]]), Coeff::from([(0, 1)]));
        assert!(boundary(&c, &b).unwrap().is_zero());
        assert!(boundary(&c, &OrientedChain::zero(2)).unwrap().is_zero());
        assert!(matches!(boundary(&c, &OrientedChain::zero(0)), Err(Error::LevelOutOfRange { .. })));
    }

    #[test]
    fn augmentation_examples() {
        let c = truncated_building(2, &Field::new(3, 1).unwrap(), 1).unwrap();
        assert!(augmentation(&OrientedChain::zero(0)).unwrap().is_empty());
        let mut v = OrientedChain::zero(0);
        v.add(&c, CoefficientSystem::Star, &[2], &Coeff::from([(0, 5)])).unwrap();
        assert_eq!(augmentation(&v).unwrap(), Coeff::from([(0, 5)]));
    }

    #[test]
    fn values_must_lie_in_the_coefficient_space() {
        let c = truncated_building(2, &Field::new(2, 1).unwrap(), 2).unwrap();
        let e = c.simplices(1).iter().find(|e| e[0] != 0 && e[1] != 0).unwrap().clone();
        let mut w = OrientedChain::zero(1);
        let far = (0..c.vertices().len()).find(|&x| !e.contains(&x) && !e.iter().all(|&v| c.adjacent(v, x)));
        let far = far.unwrap();
        assert!(w.add(&c, CoefficientSystem::Star, &e, &Coeff::from([(far, 1)])).is_err());
    }

    #[test]
    fn all_checks_small() {
        for (r, q, radius) in [(2, 2, 1), (2, 3, 2), (3, 2, 1)] {
            let c = truncated_building(r, &Field::new(q, 1).unwrap(), radius).unwrap();
            let checks = simplicial_checks(&c).unwrap();
            assert!(checks.passed(), "{checks:?}");
        }
    }
}
