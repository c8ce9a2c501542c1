//! Balls in the reduced building of `GL_R(F)` as flag complexes of lattice
//! classes, and the simplex-to-order dictionary.

use std::collections::HashMap;

use serde::Serialize;

use super::lattice::{Lattice, LatticeSpace, Vector};
use crate::error::{Error, Result};
use crate::field::{Fe, Field, TruncElem, TruncMatrix, TruncRing};
use crate::orders::{standard_order, BlockShape, OrderPattern};

pub const DEFAULT_MAX_RANK: usize = 3;
pub const MAX_RADIUS: usize = 2;

/// Vertices within distance `radius` of the standard vertex, with all
/// simplices spanned by them.
#[derive(Debug)]
pub struct TruncatedComplex {
    space: LatticeSpace,
    radius: usize,
    vertices: Vec<Lattice>,
    index: HashMap<Lattice, usize>,
    neighbours: Vec<Vec<usize>>,
    /// `simplices[d]` lists the `d`-simplices as increasing vertex indices.
    simplices: Vec<Vec<Vec<usize>>>,
}

/// Working precision for rank `r` and radius `radius`: large enough for
/// orders, translates by Weyl elements and determinant denominators.
pub fn working_level(r: usize, radius: usize) -> usize {
    (r + 2) * (radius + 2)
}

pub fn truncated_building(r: usize, field: &Field, radius: usize) -> Result<TruncatedComplex> {
    truncated_building_with_limit(r, field, radius, DEFAULT_MAX_RANK)
}

pub fn truncated_building_with_limit(r: usize, field: &Field, radius: usize, max_rank: usize) -> Result<TruncatedComplex> {
    if r < 2 || r > max_rank {
        return Err(Error::SizeLimit { what: "building rank".into(), size: r as u64, bound: max_rank as u64 });
    }
    if radius > MAX_RADIUS {
        return Err(Error::SizeLimit { what: "building radius".into(), size: radius as u64, bound: MAX_RADIUS as u64 });
    }
    let space = LatticeSpace::new(field.clone(), r, working_level(r, radius));
    let mut vertices = ball(&space, radius)?;
    vertices.sort();
    let index: HashMap<Lattice, usize> = vertices.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
    let subs = subspaces(field, r);
    let mut neighbours = vec![Vec::new(); vertices.len()];
    for (a, l) in vertices.iter().enumerate() {
        let cols = l.columns(space.ring());
        let pi_cols: Vec<Vector> = cols.iter().map(|c| c.iter().map(|e| space.ring().shift_up(e, 1)).collect()).collect();
        for basis in &subs {
            let mut gens = pi_cols.clone();
            for row in basis {
                gens.push(combine(space.ring(), &cols, row));
            }
            let m = space.normalize(&space.span(&gens)?);
            if let Some(&b) = index.get(&m) {
                neighbours[a].push(b);
                neighbours[b].push(a);
            }
        }
    }
    for n in neighbours.iter_mut() {
        n.sort_unstable();
        n.dedup();
    }
    let mut simplices: Vec<Vec<Vec<usize>>> = vec![(0..vertices.len()).map(|v| vec![v]).collect()];
    for d in 1..r {
        let mut next = Vec::new();
        for s in &simplices[d - 1] {
            let last = *s.last().unwrap();
            for &w in neighbours[last].iter().filter(|&&w| w > last) {
                if s.iter().all(|v| neighbours[*v].binary_search(&w).is_ok()) {
                    let mut t = s.clone();
                    t.push(w);
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        simplices.push(next);
    }
    Ok(TruncatedComplex { space, radius, vertices, index, neighbours, simplices })
}

/// `L` with `π^radius 𝔬^R ⊆ L ⊆ 𝔬^R` and `L ⊄ π 𝔬^R`, from all normal forms
/// with exponents at most `radius`.
fn ball(space: &LatticeSpace, radius: usize) -> Result<Vec<Lattice>> {
    let r = space.rank();
    let q = space.field().q() as u64;
    let ring = space.ring();
    let inner = space.scale(&space.standard(), radius)?;
    let mut out = Vec::new();
    let mut k = vec![0usize; r];
    loop {
        let digits: Vec<usize> = (0..r).flat_map(|i| std::iter::repeat_n(k[i], r - 1 - i)).collect();
        let count: u64 = digits.iter().map(|&d| q.pow(d as u32)).product();
        for code in 0..count {
            let mut c = code;
            let upper: Vec<TruncElem> = digits
                .iter()
                .map(|&d| {
                    let coeffs: Vec<Fe> = (0..d)
                        .map(|_| {
                            let v = (c % q) as Fe;
                            c /= q;
                            v
                        })
                        .collect();
                    ring.from_coeffs(&coeffs)
                })
                .collect();
            let l = space.from_normal_form(k.clone(), upper);
            if !space.is_divisible(&l) && space.contains(&l, &inner) {
                out.push(l);
            }
        }
        let mut pos = 0;
        while pos < r {
            k[pos] += 1;
            if k[pos] <= radius {
                break;
            }
            k[pos] = 0;
            pos += 1;
        }
        if pos == r {
            break;
        }
    }
    Ok(out)
}

fn combine(ring: &TruncRing, cols: &[Vector], coeffs: &[Fe]) -> Vector {
    let r = cols[0].len();
    let mut out = vec![ring.zero(); r];
    for (c, col) in coeffs.iter().zip(cols) {
        if *c != 0 {
            for (o, x) in out.iter_mut().zip(col) {
                *o = ring.add(o, &ring.scale(*c, x));
            }
        }
    }
    out
}

/// Bases (in reduced row echelon form) of all nonzero proper subspaces of `F_q^n`.
pub fn subspaces(field: &Field, n: usize) -> Vec<Vec<Vec<Fe>>> {
    let q = field.q() as u64;
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) - 1 {
        let pivots: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(row, &p)| ((p + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (row, c)))
            .collect();
        for code in 0..q.pow(free.len() as u32) {
            let mut c = code;
            let mut rows = vec![vec![0 as Fe; n]; pivots.len()];
            for (row, &p) in pivots.iter().enumerate() {
                rows[row][p] = 1;
            }
            for &(row, col) in &free {
                rows[row][col] = (c % q) as Fe;
                c /= q;
            }
            out.push(rows);
        }
    }
    out
}

/// The hereditary order stabilising the lattice chain of a simplex, in a
/// basis adapted to the chain.
#[derive(Clone, Debug)]
pub struct SimplexOrder {
    /// Columns form a basis of the top lattice of the chain.
    pub basis: TruncMatrix,
    pub shape: BlockShape,
    /// Valuation pattern of the order in `basis`.
    pub pattern: OrderPattern,
    /// `L_0 ⊋ L_1 ⊋ … ⊋ L_{e-1} ⊋ π L_0`.
    pub chain: Vec<Lattice>,
    det_valuation: usize,
    det_unit_inv: TruncElem,
    adjugate: TruncMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexExport {
    pub rank: usize,
    pub q: u32,
    pub radius: usize,
    pub vertices: Vec<VertexExport>,
    pub simplices: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexExport {
    pub exponents: Vec<usize>,
    pub normal_form: Vec<Vec<Fe>>,
}

impl TruncatedComplex {
    pub fn space(&self) -> &LatticeSpace {
        &self.space
    }

    pub fn rank(&self) -> usize {
        self.space.rank()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn vertices(&self) -> &[Lattice] {
        &self.vertices
    }

    pub fn vertex_index(&self, l: &Lattice) -> Option<usize> {
        self.index.get(l).copied()
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.neighbours[v]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbours[a].binary_search(&b).is_ok()
    }

    /// Top dimension present in the truncation.
    pub fn dimension(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.simplices.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_simplex(&self, s: &[usize]) -> bool {
        let mut t = s.to_vec();
        t.sort_unstable();
        t.dedup();
        t.len() == s.len() && self.simplices(t.len() - 1).binary_search(&t).is_ok()
    }

    /// Edges of the ball are all edges between its vertices.
    pub fn edge_count(&self) -> usize {
        self.simplices(1).len()
    }

    pub fn export(&self) -> ComplexExport {
        ComplexExport {
            rank: self.rank(),
            q: self.space.field().q(),
            radius: self.radius,
            vertices: self
                .vertices
                .iter()
                .map(|l| VertexExport { exponents: l.exponents().to_vec(), normal_form: l.normal_form() })
                .collect(),
            simplices: self.simplices.clone(),
        }
    }

    /// Lattice chain of a simplex: representatives scaled into `[π L_0, L_0]`
    /// and sorted by inclusion.
    pub fn chain(&self, simplex: &[usize]) -> Result<Vec<Lattice>> {
        let sp = &self.space;
        let base = self.vertices[simplex[0]].clone();
        let pi_base = sp.scale(&base, 1)?;
        let mut chain = vec![base.clone()];
        for &v in &simplex[1..] {
            let l = &self.vertices[v];
            let pl = sp.scale(l, 1)?;
            let rep = if sp.contains(&base, l) && sp.contains(l, &pi_base) {
                l.clone()
            } else if sp.contains(&base, &pl) && sp.contains(&pl, &pi_base) {
                pl
            } else {
                return Err(Error::InvalidArgument(format!("{simplex:?} is not a simplex")));
            };
            chain.push(rep);
        }
        chain.sort_by_key(Lattice::index);
        for w in chain.windows(2) {
            if !sp.contains(&w[0], &w[1]) || w[0] == w[1] {
                return Err(Error::InvalidArgument(format!("{simplex:?} is not a chain")));
            }
        }
        Ok(chain)
    }

    /// The stabiliser order of `simplex` with an adapted basis.
    pub fn simplex_order(&self, simplex: &[usize]) -> Result<SimplexOrder> {
        let sp = &self.space;
        let ring = sp.ring();
        let r = self.rank();
        let chain = self.chain(simplex)?;
        let e = chain.len();
        let pi_top: Vec<Vector> = chain[0].columns(ring).iter().map(|c| c.iter().map(|x| ring.shift_up(x, 1)).collect()).collect();
        let mut chosen: Vec<Vector> = Vec::new();
        let mut levels = Vec::new();
        for t in (0..e).rev() {
            for c in chain[t].columns(ring) {
                let current = sp.span(&[pi_top.clone(), chosen.clone()].concat())?;
                if !sp.contains_vector(&current, &c) {
                    chosen.push(c);
                    levels.push(t);
                }
            }
        }
        if chosen.len() != r {
            return Err(Error::Invariant("adapted basis has the wrong size".into()));
        }
        let mut parts = Vec::new();
        for t in (0..e).rev() {
            let n = levels.iter().filter(|&&l| l == t).count();
            if n == 0 {
                return Err(Error::Invariant(format!("chain member {t} is not a proper inclusion")));
            }
            parts.push(n);
        }
        let shape = BlockShape::new(parts)?;
        let basis = TruncMatrix::from_fn(r, |i, j| chosen[j][i].clone());
        let (det, adjugate) = det_and_adjugate(ring, &basis);
        let dv = det.valuation();
        let det_unit_inv = ring.inv(&ring.shift_down(&det, dv))?;
        Ok(SimplexOrder { pattern: standard_order(&shape), shape, basis, chain, det_valuation: dv, det_unit_inv, adjugate })
    }

    /// Whether every generator of `order` maps every lattice of `chain` into itself.
    pub fn order_stabilizes(&self, order: &SimplexOrder, chain: &[Lattice]) -> Result<bool> {
        let sp = &self.space;
        let ring = sp.ring();
        let r = self.rank();
        let scaled: Vec<Lattice> = chain.iter().map(|l| sp.scale(l, order.det_valuation)).collect::<Result<_>>()?;
        for i in 0..r {
            for j in 0..r {
                let gen = order.generator(ring, i, j);
                for (l, target) in chain.iter().zip(&scaled) {
                    for c in l.columns(ring) {
                        if !sp.contains_vector(target, &sp.mat_vec(&gen, &c)) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

impl SimplexOrder {
    /// `det(g) · g π^{v_ij} E_ij g^{-1} = g π^{v_ij} E_ij adj(g)` up to a unit.
    fn generator(&self, ring: &TruncRing, i: usize, j: usize) -> TruncMatrix {
        let r = self.basis.dim;
        let v = self.pattern.get(i, j) as usize;
        TruncMatrix::from_fn(r, |a, b| {
            let x = ring.mul(self.basis.get(a, i), self.adjugate.get(j, b));
            ring.mul(&ring.shift_up(&x, v), &self.det_unit_inv)
        })
    }
}

fn det(ring: &TruncRing, m: &[Vec<TruncElem>]) -> TruncElem {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = ring.zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<TruncElem>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, x)| x.clone()).collect()).collect();
        let t = ring.mul(&m[0][c], &det(ring, &minor));
        acc = if c % 2 == 0 { ring.add(&acc, &t) } else { ring.sub(&acc, &t) };
    }
    acc
}

fn det_and_adjugate(ring: &TruncRing, a: &TruncMatrix) -> (TruncElem, TruncMatrix) {
    let n = a.dim;
    let rows: Vec<Vec<TruncElem>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j).clone()).collect()).collect();
    let d = det(ring, &rows);
    if n == 1 {
        return (d, TruncMatrix::identity(ring, 1));
    }
    let adj = TruncMatrix::from_fn(n, |i, j| {
        // adj_ij = (-1)^{i+j} det(minor without row j, column i)
        let minor: Vec<Vec<TruncElem>> = rows
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != j)
            .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, x)| x.clone()).collect())
            .collect();
        let m = det(ring, &minor);
        if (i + j) % 2 == 0 {
            m
        } else {
            ring.neg(&m)
        }
    });
    (d, adj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Field {
        Field::new(q, 1).unwrap()
    }

    #[test]
    fn tree_balls() {
        for (q, v, e) in [(2, 4, 3), (3, 5, 4)] {
            let c = truncated_building(2, &f(q), 1).unwrap();
            assert_eq!((c.vertices().len(), c.edge_count()), (v, e));
            assert_eq!(c.dimension(), 1);
        }
        let c = truncated_building(2, &f(2), 2).unwrap();
        assert_eq!((c.vertices().len(), c.edge_count()), (10, 9));
    }

    #[test]
    fn rank_three_star() {
        let c = truncated_building(3, &f(2), 1).unwrap();
        assert_eq!(c.vertices().len(), 15);
        assert_eq!(c.neighbours(0).len(), 14);
        let at_origin = c.simplices(2).iter().filter(|t| t.contains(&0)).count();
        assert_eq!(at_origin, 21);
        for e in c.simplices(1) {
            assert!(c.simplices(2).iter().any(|t| t.contains(&e[0]) && t.contains(&e[1])));
        }
    }

    #[test]
    fn standard_simplices_have_standard_orders() {
        let c = truncated_building(2, &f(2), 1).unwrap();
        let o = c.simplex_order(&[0]).unwrap();
        assert_eq!(o.shape.parts(), &[2]);
        let edge = c.simplices(1)[0].clone();
        assert_eq!(c.simplex_order(&edge).unwrap().pattern, OrderPattern::from_rows(&[vec![0, 0], vec![1, 0]]));
    }

    #[test]
    fn orders_fix_exactly_their_simplex() {
        let c = truncated_building(3, &f(2), 1).unwrap();
        for d in 0..=c.dimension() {
            for s in c.simplices(d) {
                let o = c.simplex_order(s).unwrap();
                for v in 0..c.vertices().len() {
                    let fixed = c.order_stabilizes(&o, &[c.vertices()[v].clone()]).unwrap();
                    assert_eq!(fixed, s.contains(&v), "simplex {s:?}, vertex {v}");
                }
            }
        }
    }
}
