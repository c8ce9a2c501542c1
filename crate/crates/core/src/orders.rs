//! Hereditary orders as valuation patterns, block shapes, and the
//! representatives `x = w·d` of the extended affine Weyl group.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// A composition `(n_0, …, n_{e-1})` of `R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlockShape {
    parts: Vec<usize>,
}

impl BlockShape {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidArgument(format!("invalid block shape {parts:?}")));
        }
        Ok(BlockShape { parts })
    }

    /// `(f, …, f)` with `e_0` parts.
    pub fn uniform(f: usize, e0: usize) -> Self {
        BlockShape { parts: vec![f; e0] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn r(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn e(&self) -> usize {
        self.parts.len()
    }

    /// Block index of every coordinate.
    pub fn block_of(&self) -> Vec<usize> {
        self.parts.iter().enumerate().flat_map(|(b, &n)| std::iter::repeat_n(b, n)).collect()
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.parts
            .iter()
            .map(|&n| {
                let o = acc;
                acc += n;
                o
            })
            .collect()
    }

    pub fn refines_blocks_of(&self, f: usize) -> bool {
        self.parts.iter().all(|&n| n % f == 0)
    }

    /// The shape measured in units of `f`.
    pub fn in_units_of(&self, f: usize) -> Result<Vec<usize>> {
        if !self.refines_blocks_of(f) {
            return Err(Error::ShapeMismatch(format!("{:?} is not made of blocks of size {f}", self.parts)));
        }
        Ok(self.parts.iter().map(|&n| n / f).collect())
    }
}

impl fmt::Display for BlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All compositions of `n`, finest first.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..1u32 << (n - 1))
        .map(|mask| {
            let mut parts = Vec::new();
            let mut cur = 1;
            for i in 0..n - 1 {
                if mask & (1 << i) == 0 {
                    parts.push(cur);
                    cur = 1;
                } else {
                    cur += 1;
                }
            }
            parts.push(cur);
            parts
        })
        .collect();
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    out
}

/// The standard shapes between the minimal one `(f, …, f)` and the maximal `(f·e_0)`.
pub fn intermediate_shapes(e0: usize, f: usize) -> Vec<BlockShape> {
    compositions(e0).into_iter().map(|c| BlockShape { parts: c.into_iter().map(|k| k * f).collect() }).collect()
}

/// `{A : val(A_ij) >= v(i, j)}` for an `R×R` integer matrix `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OrderPattern {
    r: usize,
    v: Vec<i64>,
}

impl OrderPattern {
    pub fn from_fn(r: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut v = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                v.push(f(i, j));
            }
        }
        OrderPattern { r, v }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        OrderPattern::from_fn(r, |i, j| rows[i][j])
    }

    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.v[i * self.r + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.v.chunks(self.r).map(|c| c.to_vec()).collect()
    }

    /// `v(i, j) <= min_k v(i, k) + v(k, j)` for all `i, j`.
    pub fn is_multiplicatively_closed(&self) -> bool {
        let r = self.r;
        (0..r).all(|i| (0..r).all(|j| (0..r).all(|k| self.get(i, j) <= self.get(i, k) + self.get(k, j))))
    }

    pub fn is_order(&self) -> bool {
        (0..self.r).all(|i| self.get(i, i) == 0) && self.is_multiplicatively_closed()
    }

    /// Whether the set described by `self` contains the one described by `other`.
    pub fn contains(&self, other: &OrderPattern) -> bool {
        self.v.iter().zip(&other.v).all(|(a, b)| a <= b)
    }

    /// `v(i, j) + v(j, i)` summed over all coordinates; used for index counts.
    pub fn total(&self) -> i64 {
        self.v.iter().sum()
    }
}

impl fmt::Display for OrderPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// The standard hereditary order of the shape: integral on and above the
/// block diagonal, `𝔭` strictly below it.
pub fn standard_order(shape: &BlockShape) -> OrderPattern {
    let b = shape.block_of();
    OrderPattern::from_fn(shape.r(), |i, j| (b[i] > b[j]) as i64)
}

/// The Jacobson radical of [`standard_order`]: `𝔭` on and below the block diagonal.
pub fn standard_radical(shape: &BlockShape) -> OrderPattern {
    let b = shape.block_of();
    OrderPattern::from_fn(shape.r(), |i, j| (b[i] >= b[j]) as i64)
}

/// Entrywise maximum: the pattern of the intersection.
pub fn intersect_patterns(p: &OrderPattern, q: &OrderPattern) -> OrderPattern {
    assert_eq!(p.r, q.r);
    OrderPattern { r: p.r, v: p.v.iter().zip(&q.v).map(|(a, b)| *a.max(b)).collect() }
}

/// Pattern of `{x A x^{-1}}`.
pub fn conjugate_pattern(p: &OrderPattern, x: &AffineWeylElem) -> OrderPattern {
    let r = p.r;
    assert_eq!(r, x.r(), "pattern and Weyl element sizes differ");
    let sigma = x.perm();
    let a = x.exponents();
    let mut v = vec![0; r * r];
    for i in 0..r {
        for j in 0..r {
            v[sigma[i] * r + sigma[j]] = p.get(i, j) + a[i] - a[j];
        }
    }
    OrderPattern { r, v }
}

/// `x = w·d`: a permutation `w` of the `e_0` blocks of size `f` (acting after)
/// and `d = diag(π^{b_1}, …, π^{b_{e_0}})` expanded blockwise, so that
/// `x e_k = π^{a_k} e_{σ(k)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineWeylElem {
    f: usize,
    w: Vec<usize>,
    b: Vec<i64>,
}

impl AffineWeylElem {
    pub fn new(f: usize, w: Vec<usize>, b: Vec<i64>) -> Result<Self> {
        let mut seen = vec![false; w.len()];
        for &i in &w {
            if i >= w.len() || seen[i] {
                return Err(Error::InvalidArgument(format!("{w:?} is not a permutation")));
            }
            seen[i] = true;
        }
        if w.len() != b.len() || f == 0 || w.is_empty() {
            return Err(Error::InvalidArgument("permutation and exponent vector lengths differ".into()));
        }
        Ok(AffineWeylElem { f, w, b })
    }

    pub fn identity(f: usize, e0: usize) -> Self {
        AffineWeylElem { f, w: (0..e0).collect(), b: vec![0; e0] }
    }

    pub fn diagonal(f: usize, b: Vec<i64>) -> Self {
        AffineWeylElem { f, w: (0..b.len()).collect(), b }
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn e0(&self) -> usize {
        self.w.len()
    }

    pub fn r(&self) -> usize {
        self.f * self.w.len()
    }

    /// Block permutation (0-based images).
    pub fn block_perm(&self) -> &[usize] {
        &self.w
    }

    pub fn block_exponents(&self) -> &[i64] {
        &self.b
    }

    pub fn is_identity(&self) -> bool {
        self.w.iter().enumerate().all(|(i, &j)| i == j) && self.b.iter().all(|&x| x == 0)
    }

    /// Coordinate permutation `σ` with `σ(jf + t) = w(j) f + t`.
    pub fn perm(&self) -> Vec<usize> {
        (0..self.r()).map(|k| self.w[k / self.f] * self.f + k % self.f).collect()
    }

    /// Expanded exponents `a_k = b_{⌊k/f⌋}`.
    pub fn exponents(&self) -> Vec<i64> {
        (0..self.r()).map(|k| self.b[k / self.f]).collect()
    }

    /// Diagonal part `d`.
    pub fn diagonal_part(&self) -> AffineWeylElem {
        AffineWeylElem::diagonal(self.f, self.b.clone())
    }

    /// Permutation part `w`.
    pub fn permutation_part(&self) -> AffineWeylElem {
        AffineWeylElem { f: self.f, w: self.w.clone(), b: vec![0; self.w.len()] }
    }

    pub fn inverse(&self) -> AffineWeylElem {
        let e0 = self.e0();
        let mut winv = vec![0; e0];
        for (i, &j) in self.w.iter().enumerate() {
            winv[j] = i;
        }
        // x^{-1} = P_{w^{-1}} diag(π^{-b_{w^{-1}(k)}})
        let b = (0..e0).map(|k| -self.b[winv[k]]).collect();
        AffineWeylElem { f: self.f, w: winv, b }
    }

    /// `self · other`.
    pub fn compose(&self, other: &AffineWeylElem) -> AffineWeylElem {
        assert_eq!(self.f, other.f);
        let w = other.w.iter().map(|&k| self.w[k]).collect();
        let b = (0..self.e0()).map(|k| self.b[other.w[k]] + other.b[k]).collect();
        AffineWeylElem { f: self.f, w, b }
    }

    /// `max b - min b`.
    pub fn spread(&self) -> i64 {
        self.b.iter().max().unwrap() - self.b.iter().min().unwrap()
    }
}

impl fmt::Display for AffineWeylElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.w.iter().map(|i| (i + 1).to_string()).collect();
        let b: Vec<String> = self.b.iter().map(|x| x.to_string()).collect();
        write!(f, "w:{};d:{}", w.join(","), b.join(","))
    }
}

impl Serialize for AffineWeylElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses `"d:0,1"`, `"w:2,1"` or `"w:2,1;d:1,0"`; the permutation is in
/// one-line notation with 1-based images. Block size defaults to 1 and is set
/// by [`AffineWeylElem::with_block_size`].
impl FromStr for AffineWeylElem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse Weyl element {s:?}"));
        let mut w: Option<Vec<usize>> = None;
        let mut b: Option<Vec<i64>> = None;
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (tag, body) = part.split_once(':').ok_or_else(bad)?;
            let items: Vec<&str> = body.split(',').map(str::trim).collect();
            match tag.trim() {
                "w" => {
                    let v: Vec<usize> = items.iter().map(|t| t.parse::<usize>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
                    if v.contains(&0) {
                        return Err(bad());
                    }
                    w = Some(v.into_iter().map(|i| i - 1).collect());
                }
                "d" => {
                    b = Some(items.iter().map(|t| t.parse::<i64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?);
                }
                _ => return Err(bad()),
            }
        }
        let n = w.as_ref().map(Vec::len).or(b.as_ref().map(Vec::len)).ok_or_else(bad)?;
        let w = w.unwrap_or_else(|| (0..n).collect());
        let b = b.unwrap_or_else(|| vec![0; n]);
        AffineWeylElem::new(1, w, b)
    }
}

impl AffineWeylElem {
    pub fn with_block_size(mut self, f: usize) -> Self {
        self.f = f;
        self
    }
}

/// Permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All `w·d` with `w ∈ Σ_{e_0}`, `b_{e_0} = 0` and `|b_i| <= bound`,
/// permutation-major, exponents in lexicographic order.
pub fn weyl_representatives(e0: usize, f: usize, bound: i64) -> Vec<AffineWeylElem> {
    let bound = bound.max(0);
    let width = (2 * bound + 1) as usize;
    let count = width.pow(e0 as u32 - 1);
    let mut exps = Vec::with_capacity(count);
    for code in 0..count {
        let mut c = code;
        let mut b = vec![0i64; e0];
        for slot in b[..e0 - 1].iter_mut().rev() {
            *slot = (c % width) as i64 - bound;
            c /= width;
        }
        exps.push(b);
    }
    permutations(e0)
        .into_iter()
        .flat_map(|w| exps.iter().map(move |b| AffineWeylElem { f, w: w.clone(), b: b.clone() }))
        .collect()
}

/// Whether the expanded exponents are non-increasing inside every block of `shape`.
pub fn satisfies_condition_d(x: &AffineWeylElem, shape: &BlockShape) -> bool {
    let a = x.exponents();
    let blocks = shape.block_of();
    (1..a.len()).all(|k| blocks[k] != blocks[k - 1] || a[k - 1] >= a[k])
}

/// Right-multiplies `x` by a permutation of the `f`-blocks inside each block
/// of `shape` so that exponents become non-increasing blockwise; ties keep
/// their original order.
pub fn condition_d_normalize(x: &AffineWeylElem, shape: &BlockShape) -> Result<AffineWeylElem> {
    let units = shape.in_units_of(x.f)?;
    if units.iter().sum::<usize>() != x.e0() {
        return Err(Error::ShapeMismatch(format!("shape {shape} does not have size {}", x.r())));
    }
    let mut wprime: Vec<usize> = Vec::with_capacity(x.e0());
    let mut start = 0;
    for &len in &units {
        let mut idx: Vec<usize> = (start..start + len).collect();
        idx.sort_by(|&i, &j| x.b[j].cmp(&x.b[i]));
        wprime.extend(idx);
        start += len;
    }
    let wp = AffineWeylElem { f: x.f, w: wprime, b: vec![0; x.e0()] };
    Ok(x.compose(&wp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(p: &[usize]) -> BlockShape {
        BlockShape::new(p.to_vec()).unwrap()
    }

    #[test]
    fn standard_patterns() {
        assert_eq!(standard_order(&shape(&[2])), OrderPattern::from_rows(&[vec![0, 0], vec![0, 0]]));
        assert_eq!(standard_order(&shape(&[1, 1])), OrderPattern::from_rows(&[vec![0, 0], vec![1, 0]]));
        assert_eq!(
            standard_order(&shape(&[2, 1])),
            OrderPattern::from_rows(&[vec![0, 0, 0], vec![0, 0, 0], vec![1, 1, 0]])
        );
        assert_eq!(standard_radical(&shape(&[1, 1])), OrderPattern::from_rows(&[vec![1, 0], vec![1, 1]]));
    }

    #[test]
    fn standard_orders_are_closed() {
        for r in 1..=5 {
            for c in compositions(r) {
                let s = shape(&c);
                assert!(standard_order(&s).is_order());
                assert!(standard_radical(&s).is_multiplicatively_closed());
            }
        }
    }

    #[test]
    fn conjugation_examples() {
        let max = standard_order(&shape(&[2]));
        let x = AffineWeylElem::diagonal(1, vec![0, 1]);
        assert_eq!(conjugate_pattern(&max, &x), OrderPattern::from_rows(&[vec![0, -1], vec![1, 0]]));
        assert_eq!(conjugate_pattern(&max, &AffineWeylElem::identity(1, 2)), max);
        let iw = standard_order(&shape(&[1, 1]));
        assert_eq!(intersect_patterns(&iw, &max), iw);
        assert_eq!(intersect_patterns(&iw, &iw), iw);
    }

    #[test]
    fn inverse_and_compose() {
        for x in weyl_representatives(3, 1, 2) {
            let xi = x.inverse();
            assert!(x.compose(&xi).is_identity());
            assert!(xi.compose(&x).is_identity());
        }
    }

    #[test]
    fn conjugating_back_restores_the_pattern() {
        for (e0, f) in [(2, 1), (3, 1), (4, 1), (2, 2)] {
            for c in compositions(e0) {
                let s = BlockShape::new(c.iter().map(|k| k * f).collect()).unwrap();
                let p = standard_order(&s);
                for x in weyl_representatives(e0, f, 2) {
                    assert_eq!(conjugate_pattern(&conjugate_pattern(&p, &x), &x.inverse()), p);
                }
            }
        }
    }

    #[test]
    fn representative_counts() {
        assert_eq!(weyl_representatives(2, 1, 0).len(), 2);
        assert_eq!(weyl_representatives(2, 1, 1).len(), 6);
        assert_eq!(weyl_representatives(3, 1, 1).len(), 54);
        let reps = weyl_representatives(3, 2, 1);
        let mut dedup = reps.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), reps.len());
        assert!(reps.iter().all(|x| x.block_exponents()[2] == 0));
    }

    #[test]
    fn condition_d_examples() {
        let x = AffineWeylElem::diagonal(1, vec![0, 2, 1]);
        let y = condition_d_normalize(&x, &shape(&[2, 1])).unwrap();
        assert_eq!(y.block_exponents(), &[2, 0, 1]);
        assert_eq!(y.block_perm(), &[1, 0, 2]);
        let x = AffineWeylElem::diagonal(1, vec![0, 1, 0, 3]);
        let y = condition_d_normalize(&x, &shape(&[2, 2])).unwrap();
        assert_eq!(y.block_exponents(), &[1, 0, 3, 0]);
        let sorted = AffineWeylElem::diagonal(1, vec![2, 1, 0]);
        assert_eq!(condition_d_normalize(&sorted, &shape(&[3])).unwrap(), sorted);
        for x in weyl_representatives(3, 1, 2) {
            for c in compositions(3) {
                let s = shape(&c);
                assert!(satisfies_condition_d(&condition_d_normalize(&x, &s).unwrap(), &s));
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let x: AffineWeylElem = "d:0,1".parse().unwrap();
        assert_eq!(x, AffineWeylElem::diagonal(1, vec![0, 1]));
        let y: AffineWeylElem = "w:2,1;d:1,0".parse().unwrap();
        assert_eq!(y.to_string(), "w:2,1;d:1,0");
        assert_eq!(y.to_string().parse::<AffineWeylElem>().unwrap(), y);
        assert!("w:1,1".parse::<AffineWeylElem>().is_err());
        assert!("q:1".parse::<AffineWeylElem>().is_err());
    }
}
