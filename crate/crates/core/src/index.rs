//! Index combinatorics for Plücker and Segre coordinates.
//!
//! `Λ_k` is the set of `(k+1)`-subsets of `{0,...,n}`; a multi-index is an
//! element of `Λ = Λ_{k1} x ... x Λ_{kr}`. Every ambient vector in this crate is
//! addressed by the canonical order of `Λ`: part-major, each part in
//! lexicographic subset order.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::shape::FlagShape;

/// Above this many multi-indices [`ball`] refuses to materialize; use [`ball_iter`].
pub const BALL_MATERIALIZE_CAP: usize = 1_000_000;

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// A strictly increasing set of column indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SingleIndex {
    elems: Vec<usize>,
}

impl SingleIndex {
    /// Validates that `elems` is strictly increasing and bounded by `n`.
    pub fn new(elems: Vec<usize>, n: usize) -> Result<Self> {
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Shape(format!("index {:?} is not strictly increasing", elems)));
        }
        if elems.last().is_some_and(|&e| e > n) {
            return Err(Error::Shape(format!("index {:?} exceeds n = {}", elems, n)));
        }
        Ok(SingleIndex { elems })
    }

    /// The contiguous run `{start, ..., start + len - 1}`.
    pub fn run(start: usize, len: usize) -> Self {
        SingleIndex { elems: (start..start + len).collect() }
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn is_subset_of(&self, other: &SingleIndex) -> bool {
        self.elems.iter().all(|e| other.elems.binary_search(e).is_ok())
    }

    fn intersection_len(&self, other: &SingleIndex) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < self.elems.len() && j < other.elems.len() {
            match self.elems[i].cmp(&other.elems[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }
}

/// `d(I, J) = |I| - |I ∩ J|`.
pub fn distance_single(a: &SingleIndex, b: &SingleIndex) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!("cardinality mismatch: {} vs {}", a.len(), b.len())));
    }
    Ok(a.len() - a.intersection_len(b))
}

/// An element `(I^1, ..., I^r)` of `Λ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    parts: Vec<SingleIndex>,
}

impl MultiIndex {
    /// Validates the part cardinalities against `shape`.
    pub fn new(parts: Vec<SingleIndex>, shape: &FlagShape) -> Result<Self> {
        if parts.len() != shape.r() {
            return Err(Error::Shape(format!("expected {} parts, got {}", shape.r(), parts.len())));
        }
        for (part, &k) in parts.iter().zip(shape.ks()) {
            if part.len() != k + 1 || part.elems().last().is_some_and(|&e| e > shape.n()) {
                return Err(Error::Shape(format!("part {:?} does not belong to Λ_{} over n = {}", part.elems(), k, shape.n())));
            }
        }
        Ok(MultiIndex { parts })
    }

    /// Convenience constructor from raw column lists.
    pub fn from_parts(parts: &[&[usize]], shape: &FlagShape) -> Result<Self> {
        let parts = parts
            .iter()
            .map(|p| SingleIndex::new(p.to_vec(), shape.n()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts, shape)
    }

    /// Wraps parts that are already sorted and sized for their shape.
    pub(crate) fn from_sorted_parts(parts: Vec<Vec<usize>>) -> Self {
        MultiIndex { parts: parts.into_iter().map(|elems| SingleIndex { elems }).collect() }
    }

    pub fn parts(&self) -> &[SingleIndex] {
        &self.parts
    }

    /// Whether `I^1 ⊆ I^2 ⊆ ... ⊆ I^r`, i.e. `e_I` lies on the flag variety.
    pub fn is_nested(&self) -> bool {
        self.parts.windows(2).all(|w| w[0].is_subset_of(&w[1]))
    }
}

/// `d(I, J) = Σ_i d(I^i, J^i)`.
pub fn distance(a: &MultiIndex, b: &MultiIndex) -> Result<usize> {
    if a.parts.len() != b.parts.len() {
        return Err(Error::Shape(format!("part count mismatch: {} vs {}", a.parts.len(), b.parts.len())));
    }
    a.parts.iter().zip(&b.parts).map(|(x, y)| distance_single(x, y)).sum()
}

/// Lexicographic ranking of the `m`-subsets of `{0, ..., universe-1}`.
#[derive(Debug, Clone)]
pub struct Subsets {
    universe: usize,
    // table[a][b] = C(a, b) for a <= universe
    table: Vec<Vec<usize>>,
}

impl Subsets {
    pub fn new(universe: usize) -> Self {
        let mut table = alloc::vec![alloc::vec![0usize; universe + 1]; universe + 1];
        for a in 0..=universe {
            table[a][0] = 1;
            for b in 1..=a {
                table[a][b] = table[a - 1][b - 1].saturating_add(table[a - 1][b]);
            }
        }
        Subsets { universe, table }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Number of `size`-subsets.
    pub fn count(&self, size: usize) -> usize {
        if size > self.universe {
            0
        } else {
            self.table[self.universe][size]
        }
    }

    /// Lexicographic rank of a strictly increasing subset.
    pub fn rank(&self, subset: &[usize]) -> usize {
        let m = subset.len();
        let mut rank = 0;
        let mut next = 0;
        for (i, &c) in subset.iter().enumerate() {
            for j in next..c {
                rank += self.table[self.universe - 1 - j][m - 1 - i];
            }
            next = c + 1;
        }
        rank
    }

    /// Inverse of [`Self::rank`].
    pub fn unrank(&self, size: usize, mut rank: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(size);
        let mut c = 0;
        for i in 0..size {
            loop {
                let block = self.table[self.universe - 1 - c][size - 1 - i];
                if rank < block {
                    break;
                }
                rank -= block;
                c += 1;
            }
            out.push(c);
            c += 1;
        }
        out
    }
}

/// Steps `subset` to its lexicographic successor among subsets of `{0..universe-1}`.
pub(crate) fn next_subset(subset: &mut [usize], universe: usize) -> bool {
    let m = subset.len();
    for i in (0..m).rev() {
        if subset[i] < universe - m + i {
            subset[i] += 1;
            for j in i + 1..m {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The index set `Λ` of a shape with its canonical coordinate order.
#[derive(Debug, Clone)]
pub struct IndexSpace {
    shape: FlagShape,
    subsets: Subsets,
    sizes: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

impl IndexSpace {
    pub fn new(shape: &FlagShape) -> Result<Self> {
        let len = shape.ambient_len()?;
        let subsets = Subsets::new(shape.n() + 1);
        let sizes: Vec<usize> = shape.ks().iter().map(|&k| subsets.count(k + 1)).collect();
        let mut strides = alloc::vec![1usize; sizes.len()];
        for i in (0..sizes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sizes[i + 1];
        }
        Ok(IndexSpace { shape: shape.clone(), subsets, sizes, strides, len })
    }

    pub fn shape(&self) -> &FlagShape {
        &self.shape
    }

    /// `|Λ|`, the number of ambient coordinates.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn subsets(&self) -> &Subsets {
        &self.subsets
    }

    /// Sizes `C(n+1, k_i+1)` of the factors.
    pub fn part_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Coordinate position of `index` in the canonical order.
    pub fn position(&self, index: &MultiIndex) -> usize {
        index
            .parts()
            .iter()
            .zip(&self.strides)
            .map(|(p, s)| self.subsets.rank(p.elems()) * s)
            .sum()
    }

    /// Multi-index at coordinate `pos`.
    pub fn at(&self, mut pos: usize) -> MultiIndex {
        let parts = self
            .shape
            .ks()
            .iter()
            .zip(&self.strides)
            .map(|(&k, &stride)| {
                let rank = pos / stride;
                pos %= stride;
                SingleIndex { elems: self.subsets.unrank(k + 1, rank) }
            })
            .collect();
        MultiIndex { parts }
    }

    /// All of `Λ` in canonical order.
    pub fn iter(&self) -> LambdaIter<'_> {
        LambdaIter { space: self, current: Some(self.first()) }
    }

    fn first(&self) -> Vec<Vec<usize>> {
        self.shape.ks().iter().map(|&k| (0..=k).collect()).collect()
    }
}

/// Iterator over `Λ` in canonical order.
pub struct LambdaIter<'a> {
    space: &'a IndexSpace,
    current: Option<Vec<Vec<usize>>>,
}

impl Iterator for LambdaIter<'_> {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let current = self.current.as_mut()?;
        let item = MultiIndex { parts: current.iter().map(|p| SingleIndex { elems: p.clone() }).collect() };
        let universe = self.space.shape.n() + 1;
        let mut advanced = false;
        for i in (0..current.len()).rev() {
            if next_subset(&mut current[i], universe) {
                advanced = true;
                break;
            }
            let len = current[i].len();
            current[i] = (0..len).collect();
        }
        if !advanced {
            self.current = None;
        }
        Some(item)
    }
}

/// Streaming form of [`ball`].
pub fn ball_iter<'a>(space: &'a IndexSpace, center: &'a MultiIndex, radius: usize) -> impl Iterator<Item = MultiIndex> + 'a {
    space
        .iter()
        .filter(move |j| distance(center, j).map(|d| d <= radius).unwrap_or(false))
}

/// `{ J ∈ Λ : d(I, J) <= radius }` in canonical order.
pub fn ball(space: &IndexSpace, center: &MultiIndex, radius: usize) -> Result<Vec<MultiIndex>> {
    if space.len() > BALL_MATERIALIZE_CAP {
        return Err(Error::CapExceeded(format!(
            "|Λ| = {} exceeds the materialization cap {}; use ball_iter",
            space.len(),
            BALL_MATERIALIZE_CAP
        )));
    }
    Ok(ball_iter(space, center, radius).collect())
}

/// Coordinate positions of [`ball`], ascending.
pub fn ball_positions(space: &IndexSpace, center: &MultiIndex, radius: usize) -> Result<Vec<usize>> {
    Ok(ball(space, center, radius)?.iter().map(|j| space.position(j)).collect())
}

/// The j-th staircase coordinate point (1-based):
/// `I_j^i = {(k_r+1)(j-1), ..., (k_r+1)(j-1) + k_i}`.
pub fn staircase_point(shape: &FlagShape, j: usize) -> Result<MultiIndex> {
    if j == 0 || j > shape.alpha() {
        return Err(Error::Precondition(format!("staircase point {} outside 1..={}", j, shape.alpha())));
    }
    let offset = (shape.k_max() + 1) * (j - 1);
    let parts = shape.ks().iter().map(|&k| SingleIndex::run(offset, k + 1)).collect();
    Ok(MultiIndex { parts })
}

/// The points `I_1, ..., I_α` with pairwise disjoint supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateFamily {
    pub points: Vec<MultiIndex>,
}

/// Staircase family of a shape; requires `α >= 2`.
pub fn coordinate_family(shape: &FlagShape) -> Result<CoordinateFamily> {
    let alpha = shape.alpha();
    if alpha < 2 {
        return Err(Error::UnsupportedShape(format!("{} has α = {} < 2 (needs n >= 2k_r + 1)", shape, alpha)));
    }
    let points = (1..=alpha).map(|j| staircase_point(shape, j)).collect::<Result<_>>()?;
    Ok(CoordinateFamily { points })
}

/// `h_m(k)`: write `k + 1 = 2^λ1 + ... + 2^λl + ε` with `λ1 > ... > λl >= 1`,
/// `ε ∈ {0, 1}`, and return `m^(λ1-1) + ... + m^(λl-1)`.
pub fn h_m(m: u64, k: u64) -> Result<u128> {
    let value = k.checked_add(1).ok_or_else(|| Error::Overflow("k + 1".into()))?;
    let mut total: u128 = 0;
    for bit in 1..u64::BITS {
        if value >> bit & 1 == 1 {
            let term = (m as u128)
                .checked_pow(bit - 1)
                .ok_or_else(|| Error::Overflow(format!("{}^{}", m, bit - 1)))?;
            total = total.checked_add(term).ok_or_else(|| Error::Overflow("h_m sum".into()))?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn single(e: &[usize]) -> SingleIndex {
        SingleIndex::new(e.to_vec(), 10).unwrap()
    }

    #[test]
    fn single_distances() {
        assert_eq!(distance_single(&single(&[0, 1]), &single(&[0, 1])).unwrap(), 0);
        assert_eq!(distance_single(&single(&[0, 1]), &single(&[2, 3])).unwrap(), 2);
        assert_eq!(distance_single(&single(&[0, 1, 2]), &single(&[0, 3, 4])).unwrap(), 2);
        assert!(distance_single(&single(&[0, 1]), &single(&[0, 1, 2])).is_err());
    }

    #[test]
    fn multi_distance_sums_parts() {
        let shape = FlagShape::flag(&[0, 1], 3).unwrap();
        let i = MultiIndex::from_parts(&[&[0], &[0, 1]], &shape).unwrap();
        let j = MultiIndex::from_parts(&[&[2], &[2, 3]], &shape).unwrap();
        assert_eq!(distance(&i, &j).unwrap(), 3);
        assert_eq!(distance(&i, &i).unwrap(), 0);
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(SingleIndex::new(vec![1, 1], 3).is_err());
        assert!(SingleIndex::new(vec![2, 1], 3).is_err());
        assert!(SingleIndex::new(vec![0, 4], 3).is_err());
        let shape = FlagShape::flag(&[1], 3).unwrap();
        assert!(MultiIndex::from_parts(&[&[0]], &shape).is_err());
    }

    #[test]
    fn balls_on_g13() {
        let shape = FlagShape::flag(&[1], 3).unwrap();
        let space = IndexSpace::new(&shape).unwrap();
        let i = MultiIndex::from_parts(&[&[0, 1]], &shape).unwrap();
        assert_eq!(ball(&space, &i, 0).unwrap(), vec![i.clone()]);
        let b1: Vec<Vec<usize>> = ball(&space, &i, 1).unwrap().iter().map(|m| m.parts()[0].elems().to_vec()).collect();
        assert_eq!(b1, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]);
        assert_eq!(ball(&space, &i, 2).unwrap().len(), 6);
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let shape = FlagShape::product(&[0, 1], 3).unwrap();
        let space = IndexSpace::new(&shape).unwrap();
        let all: Vec<MultiIndex> = space.iter().collect();
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for (pos, idx) in all.iter().enumerate() {
            assert_eq!(space.position(idx), pos);
            assert_eq!(&space.at(pos), idx);
        }
    }

    #[test]
    fn coordinate_families() {
        let g = FlagShape::flag(&[1], 3).unwrap();
        let fam = coordinate_family(&g).unwrap();
        assert_eq!(fam.points.len(), 2);
        assert_eq!(fam.points[0].parts()[0].elems(), &[0, 1]);
        assert_eq!(fam.points[1].parts()[0].elems(), &[2, 3]);

        let f = FlagShape::flag(&[0, 1], 3).unwrap();
        let fam = coordinate_family(&f).unwrap();
        assert_eq!(fam.points[1], MultiIndex::from_parts(&[&[2], &[2, 3]], &f).unwrap());

        let small = FlagShape::flag(&[0, 1], 2).unwrap();
        assert!(matches!(coordinate_family(&small), Err(Error::UnsupportedShape(_))));
    }

    #[test]
    fn h_m_values() {
        assert_eq!(h_m(5, 0).unwrap(), 0);
        assert_eq!(h_m(2, 3).unwrap(), 2);
        assert_eq!(h_m(2, 5).unwrap(), 3);
        assert_eq!(h_m(3, 4).unwrap(), 3);
        for t in 1..8u32 {
            assert_eq!(h_m(4, (1u64 << t) - 1).unwrap(), 4u128.pow(t - 1));
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), Some(6));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(245, 5), Some(7_060_140_549));
        let s = Subsets::new(6);
        assert_eq!(s.count(3), 20);
        for r in 0..20 {
            assert_eq!(s.rank(&s.unrank(3, r)), r);
        }
    }

    fn shape_strategy() -> impl Strategy<Value = FlagShape> {
        (proptest::collection::vec(0usize..3, 1..3), 0usize..3).prop_map(|(mut ks, extra)| {
            ks.sort();
            let n = 2 * ks.last().unwrap() + 1 + extra;
            FlagShape::product(&ks, n).unwrap()
        })
    }

    proptest! {
        #[test]
        fn distance_is_a_metric(shape in shape_strategy(), a in 0usize..10_000, b in 0usize..10_000, c in 0usize..10_000) {
            let space = IndexSpace::new(&shape).unwrap();
            let len = space.len();
            let (x, y, z) = (space.at(a % len), space.at(b % len), space.at(c % len));
            let dxy = distance(&x, &y).unwrap();
            prop_assert_eq!(dxy, distance(&y, &x).unwrap());
            prop_assert_eq!(dxy == 0, x == y);
            prop_assert!(distance(&x, &z).unwrap() <= dxy + distance(&y, &z).unwrap());
            prop_assert!(dxy <= shape.diameter());
        }

        #[test]
        fn ball_size_is_homogeneous(shape in shape_strategy(), a in 0usize..10_000, s in 0usize..6) {
            let space = IndexSpace::new(&shape).unwrap();
            let base = staircase_point(&shape, 1).unwrap();
            let other = space.at(a % space.len());
            prop_assert_eq!(ball(&space, &base, s).unwrap().len(), ball(&space, &other, s).unwrap().len());
        }

        #[test]
        fn staircase_pair_attains_diameter(shape in shape_strategy()) {
            let fam = coordinate_family(&shape).unwrap();
            prop_assert_eq!(distance(&fam.points[0], &fam.points[1]).unwrap(), shape.diameter());
        }

        #[test]
        fn h_m_is_monotone(m in 2u64..6, k in 0u64..200) {
            prop_assert!(h_m(m, k).unwrap() <= h_m(m, k + 1).unwrap());
            prop_assert!(h_m(m, k).unwrap() <= h_m(m + 1, k).unwrap());
        }
    }
}
