use alloc::vec;
use alloc::vec::Vec;

use super::{Field, Ring};
use crate::index::{next_subset, Subsets};

/// A dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    /// A `rows x cols` matrix filled with `fill`.
    pub fn new(rows: usize, cols: usize, fill: E) -> Self {
        Matrix { rows, cols, data: vec![fill; rows * cols] }
    }

    /// Builds a matrix from rows of length `cols`.
    ///
    /// # Panics
    /// If some row has the wrong length.
    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "row length does not match column count");
            data.extend(row);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        let mut m = Matrix::new(n, n, ring.zero());
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: E) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [E] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[E]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn push_row(&mut self, row: Vec<E>) {
        assert_eq!(row.len(), self.cols, "row length does not match column count");
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, other.cols, "column counts differ");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// The submatrix on the given columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Matrix<E> {
        let rows = self.row_iter().map(|r| columns.iter().map(|&c| r[c].clone()).collect()).collect();
        Matrix::from_rows(columns.len(), rows)
    }

    /// The submatrix with the given columns removed.
    pub fn delete_columns(&self, columns: &[usize]) -> Matrix<E> {
        let mut keep = vec![true; self.cols];
        for &c in columns {
            keep[c] = false;
        }
        let kept: Vec<usize> = (0..self.cols).filter(|&c| keep[c]).collect();
        self.select_columns(&kept)
    }

    pub fn map<F, T: Clone>(&self, f: F) -> Matrix<T>
    where
        F: FnMut(&E) -> T,
    {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Matrix<E> {
        let rows = (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j).clone()).collect()).collect();
        Matrix::from_rows(self.rows, rows)
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::new(self.rows, other.cols, ring.zero());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    ring.add_mul_assign(&mut out.data[idx], a, other.get(k, j));
                }
            }
        }
        out
    }
}

/// Reduces `m` in place to reduced row echelon form and returns the pivot columns.
pub fn rref<F: Field>(field: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(p) = (r..m.rows()).find(|&i| !field.is_zero(m.get(i, c))) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = field.inv(m.get(r, c)).expect("pivot is non-zero");
        for x in m.row_mut(r)[c..].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row: Vec<F::Elem> = m.row(r)[c..].to_vec();
        for i in 0..m.rows() {
            if i == r {
                continue;
            }
            let factor = m.get(i, c).clone();
            if field.is_zero(&factor) {
                continue;
            }
            let factor = field.neg(&factor);
            for (x, y) in m.row_mut(i)[c..].iter_mut().zip(&pivot_row) {
                field.add_mul_assign(x, &factor, y);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank by forward elimination on a scratch copy.
pub(crate) fn echelon_rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| !field.is_zero(a.get(i, c))) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = field.inv(a.get(r, c)).expect("pivot is non-zero");
        let pivot_row: Vec<F::Elem> = a.row(r)[c..].to_vec();
        for i in r + 1..a.rows() {
            let entry = a.get(i, c).clone();
            if field.is_zero(&entry) {
                continue;
            }
            let factor = field.neg(&field.mul(&entry, &inv));
            for (x, y) in a.row_mut(i)[c..].iter_mut().zip(&pivot_row) {
                field.add_mul_assign(x, &factor, y);
            }
        }
        r += 1;
    }
    r
}

/// Rank of `m` over `field`.
pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    field.rank_of(m)
}

/// A basis of the right null space `{x : m x = 0}`.
pub fn kernel<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut a = m.clone();
    let pivots = rref(field, &mut a);
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); m.cols()];
        v[free] = field.one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(a.get(r, free));
        }
        basis.push(v);
    }
    basis
}

/// Maximal minors on leading row blocks.
///
/// `levels[i][rank(S)]` is the determinant of rows `0..=i` restricted to the
/// column set `S` with `|S| = i + 1`, where `rank` is the lexicographic rank
/// of [`Subsets`] over the columns.
#[derive(Debug, Clone)]
pub struct LeadingMinors<E> {
    pub levels: Vec<Vec<E>>,
    pub subsets: Subsets,
}

impl<E> LeadingMinors<E> {
    /// The minor on rows `0..subset.len()` and columns `subset`.
    pub fn get(&self, subset: &[usize]) -> &E {
        &self.levels[subset.len() - 1][self.subsets.rank(subset)]
    }
}

/// Computes all minors `det(rows 0..=i, S)` for `i <= max_level` by Laplace
/// expansion along the last row. Division-free, so any commutative ring works.
pub fn leading_minors<R: Ring>(ring: &R, m: &Matrix<R::Elem>, max_level: usize) -> LeadingMinors<R::Elem> {
    let cols = m.cols();
    let subsets = Subsets::new(cols);
    let top = max_level.min(m.rows().saturating_sub(1)).min(cols.saturating_sub(1));
    let mut levels: Vec<Vec<R::Elem>> = Vec::new();
    if m.rows() == 0 || cols == 0 {
        return LeadingMinors { levels, subsets };
    }
    levels.push(m.row(0).to_vec());
    let mut scratch = Vec::with_capacity(cols);
    for i in 1..=top {
        let size = i + 1;
        let mut level = Vec::with_capacity(subsets.count(size));
        let mut s: Vec<usize> = (0..size).collect();
        loop {
            let mut acc = ring.zero();
            for pos in 0..size {
                let entry = m.get(i, s[pos]);
                if ring.is_zero(entry) {
                    continue;
                }
                scratch.clear();
                scratch.extend(s.iter().enumerate().filter(|&(q, _)| q != pos).map(|(_, &c)| c));
                let minor = &levels[i - 1][subsets.rank(&scratch)];
                if (i + pos) % 2 == 0 {
                    ring.add_mul_assign(&mut acc, entry, minor);
                } else {
                    acc = ring.sub(&acc, &ring.mul(entry, minor));
                }
            }
            level.push(acc);
            if !next_subset(&mut s, cols) {
                break;
            }
        }
        levels.push(level);
    }
    LeadingMinors { levels, subsets }
}

/// Determinant of a square matrix without division.
pub fn det<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> R::Elem {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    if m.rows() == 0 {
        return ring.one();
    }
    let minors = leading_minors(ring, m, m.rows() - 1);
    minors.levels[m.rows() - 1][0].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alg::{PrimeField, Sample};
    use crate::seeded_rng;

    fn fp() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    fn of_i64(f: &PrimeField, rows: &[&[i64]]) -> Matrix<u64> {
        Matrix::from_rows(rows[0].len(), rows.iter().map(|r| r.iter().map(|&x| f.of_i64(x)).collect()).collect())
    }

    #[test]
    fn rank_examples() {
        let f = fp();
        assert_eq!(rank(&f, &Matrix::identity(&f, 4)), 4);
        assert_eq!(rank(&f, &Matrix::new(3, 5, 0)), 0);
        assert_eq!(rank(&f, &of_i64(&f, &[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]])), 2);
    }

    #[test]
    fn det_matches_cofactor_formula() {
        let f = fp();
        let m = of_i64(&f, &[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) + 0 = -52 - 2 = -54
        assert_eq!(det(&f, &m), f.of_i64(-54));
    }

    #[test]
    fn leading_minors_agree_with_det_of_submatrix() {
        let f = fp();
        let mut rng = seeded_rng(3);
        let rows = (0..3).map(|_| (0..5).map(|_| f.random(&mut rng)).collect()).collect();
        let m = Matrix::from_rows(5, rows);
        let minors = leading_minors(&f, &m, 2);
        let mut s = vec![0, 1, 2];
        loop {
            let top = Matrix::from_rows(5, (0..3).map(|i| m.row(i).to_vec()).collect());
            assert_eq!(*minors.get(&s), det(&f, &top.select_columns(&s)));
            if !next_subset(&mut s, 5) {
                break;
            }
        }
    }

    #[test]
    fn kernel_is_annihilated() {
        let f = fp();
        let m = of_i64(&f, &[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 0, 1]]);
        let ker = kernel(&f, &m);
        assert_eq!(ker.len(), 4 - rank(&f, &m));
        for v in ker {
            for row in m.row_iter() {
                let dot = row.iter().zip(&v).fold(0, |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
                assert_eq!(dot, 0);
            }
        }
    }

    #[test]
    fn rref_pivots_are_unit_columns() {
        let f = fp();
        let mut m = of_i64(&f, &[&[0, 2, 4], &[1, 1, 1], &[1, 3, 5]]);
        let pivots = rref(&f, &mut m);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.row(0), &[1, 0, f.of_i64(-1)]);
        assert_eq!(m.row(1), &[0, 1, 2]);
        assert_eq!(m.row(2), &[0, 0, 0]);
    }
}
