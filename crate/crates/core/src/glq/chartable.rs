//! Character tables by simultaneous diagonalisation of the class algebra
//! modulo a prime, with exact lifting to cyclotomic integers.

use std::sync::Arc;

use serde::Serialize;

use super::group::GLGroup;
use super::modp::{self, Fl};
use crate::cyclo::CycValue;
use crate::error::{Error, Result};

/// A class function: one exact value per conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassFunction {
    pub values: Vec<CycValue>,
}

impl ClassFunction {
    pub fn degree(&self) -> i64 {
        self.values[0].as_integer().expect("degree is rational")
    }

    pub fn conj(&self) -> ClassFunction {
        ClassFunction { values: self.values.iter().map(CycValue::conj).collect() }
    }
}

#[derive(Debug)]
pub struct CharacterTable {
    group: Arc<GLGroup>,
    irreducibles: Vec<ClassFunction>,
}

impl CharacterTable {
    pub fn group(&self) -> &Arc<GLGroup> {
        &self.group
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irreducibles
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.irreducibles.iter().map(ClassFunction::degree).collect()
    }

    pub fn value(&self, chi: usize, class: usize) -> &CycValue {
        &self.irreducibles[chi].values[class]
    }

    /// `⟨a, b⟩ = |G|^{-1} Σ_g a(g) conj b(g)`, exact.
    pub fn inner_product(&self, a: &ClassFunction, b: &ClassFunction) -> Result<CycValue> {
        let m = self.group.exponent();
        let mut acc = CycValue::zero(m);
        for (k, cl) in self.group.classes().iter().enumerate() {
            acc.add_assign(&a.values[k].mul(&b.values[k].conj()).scale(cl.size as i64));
        }
        acc.div_exact(self.group.order() as i64)
            .ok_or_else(|| Error::Invariant("inner product is not an algebraic integer".into()))
    }

    /// Index of the trivial character.
    pub fn trivial(&self) -> usize {
        self.irreducibles
            .iter()
            .position(|c| c.values.iter().all(|v| v.as_integer() == Some(1)))
            .expect("trivial character present")
    }

    /// Checks both orthogonality relations and `Σ χ(1)^2 = |G|`.
    pub fn verify(&self) -> Result<()> {
        let g = &self.group;
        let r = g.num_classes();
        if self.irreducibles.len() != r {
            return Err(Error::Invariant(format!("{} characters for {} classes", self.irreducibles.len(), r)));
        }
        let deg_sq: i64 = self.degrees().iter().map(|d| d * d).sum();
        if deg_sq as u64 != g.order() {
            return Err(Error::Invariant(format!("sum of squared degrees {deg_sq} != {}", g.order())));
        }
        for (i, a) in self.irreducibles.iter().enumerate() {
            for (j, b) in self.irreducibles.iter().enumerate().skip(i) {
                let ip = self.inner_product(a, b)?;
                if ip.as_integer() != Some((i == j) as i64) {
                    return Err(Error::Invariant(format!("<chi_{i}, chi_{j}> = {ip}")));
                }
            }
        }
        let m = g.exponent();
        for k in 0..r {
            for l in k..r {
                let mut acc = CycValue::zero(m);
                for chi in &self.irreducibles {
                    acc.add_assign(&chi.values[k].mul(&chi.values[l].conj()));
                }
                let expect = if k == l { (g.order() / g.classes()[k].size) as i64 } else { 0 };
                if acc.as_integer() != Some(expect) {
                    return Err(Error::Invariant(format!("column orthogonality fails at classes {k}, {l}")));
                }
            }
        }
        Ok(())
    }
}

/// Computes the complete list of irreducible characters, sorted by degree
/// and then by value vector.
pub fn character_table(group: Arc<GLGroup>) -> Result<CharacterTable> {
    let g = &*group;
    let r = g.num_classes();
    let order = g.order();
    let m = g.exponent() as u64;
    let ell = modp::prime_one_mod(m, 4 * order);
    let fl = Fl { ell };
    let z = fl.pow(modp::primitive_root(ell), (ell - 1) / m);

    let coeff = g.class_coefficients();
    let at = |i: usize, j: usize, k: usize| coeff[(i * r + j) * r + k] % ell;

    // Split F_ℓ^r into common eigenspaces of the class-multiplication maps.
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r).map(|i| unit(r, i)).collect()];
    for j in 1..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            next.extend(split_space(fl, r, &basis, |i, k| at(i, j, k))?);
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::Invariant("class algebra did not split into lines".into()));
    }

    let sizes: Vec<u64> = g.classes().iter().map(|c| c.size % ell).collect();
    let mut chars = Vec::with_capacity(r);
    for space in spaces {
        let v = &space[0];
        let norm = fl.inv(v[0]);
        let omega: Vec<u64> = v.iter().map(|&x| fl.mul(x, norm)).collect();
        // Σ ω_k ω_{k*} / |C_k| = |G| / χ(1)^2
        let mut s = 0;
        for k in 0..r {
            let kstar = g.inverse_class(k) as usize;
            s = fl.add(s, fl.mul(fl.mul(omega[k], omega[kstar]), fl.inv(sizes[k])));
        }
        let d2 = fl.mul(order % ell, fl.inv(s));
        let d = (d2 as f64).sqrt().round() as u64;
        if d * d != d2 || d == 0 || !order.is_multiple_of(d) {
            return Err(Error::Invariant(format!("degree square {d2} is not a valid degree")));
        }
        let chi_mod: Vec<u64> = (0..r).map(|k| fl.mul(fl.mul(omega[k], d % ell), fl.inv(sizes[k]))).collect();
        let values = (0..r).map(|k| lift_value(fl, z, m as u32, g, k, &chi_mod, d)).collect::<Result<Vec<_>>>()?;
        chars.push(ClassFunction { values });
    }
    chars.sort_by(|a, b| {
        a.degree().cmp(&b.degree()).then_with(|| {
            a.values
                .iter()
                .zip(&b.values)
                .map(|(x, y)| x.canonical_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    Ok(CharacterTable { group, irreducibles: chars })
}

fn unit(r: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

/// Splits an invariant subspace (rows in reduced echelon form) into the
/// eigenspaces of the linear map `v ↦ M v`, `M_{ik} = entry(i, k)`.
fn split_space(
    fl: Fl,
    r: usize,
    basis: &[Vec<u64>],
    entry: impl Fn(usize, usize) -> u64,
) -> Result<Vec<Vec<Vec<u64>>>> {
    let s = basis.len();
    let pivots: Vec<usize> = basis.iter().map(|b| b.iter().position(|&x| x != 0).unwrap()).collect();
    // restricted matrix: column t holds the coordinates of M b_t
    let mut a = vec![0u64; s * s];
    for (t, b) in basis.iter().enumerate() {
        for (u, &p) in pivots.iter().enumerate() {
            let mut acc = 0;
            for (k, &bk) in b.iter().enumerate() {
                if bk != 0 {
                    acc = fl.add(acc, fl.mul(entry(p, k), bk));
                }
            }
            a[u * s + t] = acc;
        }
    }
    let eigen = modp::roots(fl, &modp::char_poly(fl, s, &a));
    let mut out = Vec::new();
    let mut total = 0;
    for lambda in eigen {
        let shifted: Vec<u64> =
            a.iter().enumerate().map(|(idx, &x)| if idx / s == idx % s { fl.sub(x, lambda) } else { x }).collect();
        let ys = modp::null_space(fl, s, &shifted);
        let mut rows: Vec<Vec<u64>> = ys
            .iter()
            .map(|y| {
                let mut v = vec![0; r];
                for (t, &yt) in y.iter().enumerate() {
                    if yt != 0 {
                        for (k, &bk) in basis[t].iter().enumerate() {
                            v[k] = fl.add(v[k], fl.mul(yt, bk));
                        }
                    }
                }
                v
            })
            .collect();
        modp::rref(fl, &mut rows, r);
        total += rows.len();
        out.push(rows);
    }
    if total != s {
        return Err(Error::Invariant("class-multiplication map is not diagonalisable mod ℓ".into()));
    }
    Ok(out)
}

/// Recovers `χ(g_k)` exactly from its residues on the powers of `g_k`:
/// the multiplicity of the eigenvalue `ζ_o^s` is `o^{-1} Σ_t χ(g^t) ζ_o^{-st}`.
fn lift_value(fl: Fl, z: u64, m: u32, g: &GLGroup, k: usize, chi_mod: &[u64], d: u64) -> Result<CycValue> {
    let cl = &g.classes()[k];
    let o = cl.order as u64;
    let zo = fl.pow(z, m as u64 / o);
    let inv_o = fl.inv(o % fl.ell);
    let mut exps = vec![0i64; m as usize];
    let mut total = 0;
    for s in 0..o {
        let mut acc = 0;
        for t in 0..o {
            let w = fl.pow(zo, (fl.ell - 1 - (s * t) % (fl.ell - 1)) % (fl.ell - 1));
            acc = fl.add(acc, fl.mul(chi_mod[cl.powers[t as usize] as usize], w));
        }
        let mult = fl.mul(acc, inv_o);
        if mult > d {
            return Err(Error::Invariant(format!("eigenvalue multiplicity {mult} exceeds degree {d}")));
        }
        total += mult;
        exps[(s * (m as u64 / o)) as usize] = mult as i64;
    }
    if total != d {
        return Err(Error::Invariant("eigenvalue multiplicities do not sum to the degree".into()));
    }
    let v = CycValue::from_exponents(m, &exps);
    if v.reduce_mod(z, fl.ell) != chi_mod[k] {
        return Err(Error::Invariant("lifted value disagrees with its residue".into()));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn table(n: usize, p: u32, k: u32) -> CharacterTable {
        let g = GLGroup::with_bound(n, &Field::new(p, k).unwrap(), 25_000).unwrap();
        character_table(Arc::new(g)).unwrap()
    }

    #[test]
    fn s3_table() {
        let t = table(2, 2, 1);
        t.verify().unwrap();
        assert_eq!(t.degrees(), vec![1, 1, 2]);
        // class sizes 1, then by least element
        let sizes: Vec<u64> = t.group().classes().iter().map(|c| c.size).collect();
        let sign = &t.irreducibles()[if t.value(0, 1).as_integer() == Some(1) { 1 } else { 0 }];
        for (k, s) in sizes.iter().enumerate() {
            let expect = match s {
                1 => 1,
                3 => -1,
                _ => 1,
            };
            assert_eq!(sign.values[k].as_integer(), Some(expect));
        }
    }

    #[test]
    fn cyclic_groups() {
        for q in [2u32, 3, 5] {
            let t = table(1, q, 1);
            t.verify().unwrap();
            assert_eq!(t.len(), q as usize - 1);
            assert!(t.degrees().iter().all(|&d| d == 1));
        }
    }

    #[test]
    fn gl2_f3_degrees() {
        let t = table(2, 3, 1);
        t.verify().unwrap();
        assert_eq!(t.degrees(), vec![1, 1, 2, 2, 2, 3, 3, 4]);
    }
}
