use alloc::vec;
use alloc::vec::Vec;

use super::{kernel, rank, rref, Field, Matrix};
use crate::error::{Error, Result};

/// A linear subspace of `F^ambient`, stored as a reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis<E> {
    basis: Matrix<E>,
    pivots: Vec<usize>,
}

impl<E: Clone + PartialEq + core::fmt::Debug> SubspaceBasis<E> {
    /// The span of the rows of `m`.
    pub fn from_rows<F: Field<Elem = E>>(field: &F, m: &Matrix<E>) -> Self {
        let mut a = m.clone();
        let pivots = rref(field, &mut a);
        let rows = (0..pivots.len()).map(|i| a.row(i).to_vec()).collect();
        SubspaceBasis { basis: Matrix::from_rows(m.cols(), rows), pivots }
    }

    /// The span of the unit vectors `e_c` for `c` in `support`.
    pub fn coordinate<F: Field<Elem = E>>(field: &F, ambient: usize, support: &[usize]) -> Self {
        let mut cols = support.to_vec();
        cols.sort_unstable();
        cols.dedup();
        let rows = cols
            .iter()
            .map(|&c| {
                let mut v = vec![field.zero(); ambient];
                v[c] = field.one();
                v
            })
            .collect();
        SubspaceBasis { basis: Matrix::from_rows(ambient, rows), pivots: cols }
    }

    /// The whole ambient space.
    pub fn full<F: Field<Elem = E>>(field: &F, ambient: usize) -> Self {
        let all: Vec<usize> = (0..ambient).collect();
        Self::coordinate(field, ambient, &all)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<E> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: usize) -> Result<()> {
        if self.ambient() != other {
            return Err(Error::AmbientMismatch { left: self.ambient(), right: other });
        }
        Ok(())
    }

    /// Whether `v` lies in the subspace.
    pub fn contains<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> Result<bool> {
        self.check_ambient(v.len())?;
        let mut residual = v.to_vec();
        for (row, &p) in self.basis.row_iter().zip(&self.pivots) {
            let c = residual[p].clone();
            if field.is_zero(&c) {
                continue;
            }
            let c = field.neg(&c);
            for (x, y) in residual.iter_mut().zip(row) {
                field.add_mul_assign(x, &c, y);
            }
        }
        Ok(residual.iter().all(|x| field.is_zero(x)))
    }

    pub fn is_subspace_of<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Result<bool> {
        other.check_ambient(self.ambient())?;
        for row in self.basis.row_iter() {
            if !other.contains(field, row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The sum `self + other`.
    pub fn join<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Result<Self> {
        self.check_ambient(other.ambient())?;
        Ok(Self::from_rows(field, &self.basis.vstack(&other.basis)))
    }

    /// The intersection with the coordinate subspace spanned by `e_c`, `c` in `support`.
    pub fn intersect_coordinate<F: Field<Elem = E>>(&self, field: &F, support: &[usize]) -> Self {
        let mut inside = vec![false; self.ambient()];
        for &c in support {
            inside[c] = true;
        }
        let outside: Vec<usize> = (0..self.ambient()).filter(|&c| !inside[c]).collect();
        let relations = kernel(field, &self.basis.select_columns(&outside).transpose());
        let rows = relations
            .iter()
            .map(|x| {
                let mut v = vec![field.zero(); self.ambient()];
                for (coef, row) in x.iter().zip(self.basis.row_iter()) {
                    if field.is_zero(coef) {
                        continue;
                    }
                    for (acc, y) in v.iter_mut().zip(row) {
                        field.add_mul_assign(acc, coef, y);
                    }
                }
                v
            })
            .collect();
        Self::from_rows(field, &Matrix::from_rows(self.ambient(), rows))
    }

    /// The intersection `self ∩ other`, by Zassenhaus' algorithm.
    pub fn intersection<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Result<Self> {
        self.check_ambient(other.ambient())?;
        let n = self.ambient();
        let mut rows = Vec::with_capacity(self.rank() + other.rank());
        for r in self.basis.row_iter() {
            let mut v = r.to_vec();
            v.extend_from_slice(r);
            rows.push(v);
        }
        for r in other.basis.row_iter() {
            let mut v = r.to_vec();
            v.extend(core::iter::repeat_n(field.zero(), n));
            rows.push(v);
        }
        let mut m = Matrix::from_rows(2 * n, rows);
        let pivots = rref(field, &mut m);
        let tail: Vec<Vec<E>> =
            pivots.iter().enumerate().filter(|&(_, &p)| p >= n).map(|(i, _)| m.row(i)[n..].to_vec()).collect();
        Ok(Self::from_rows(field, &Matrix::from_rows(n, tail)))
    }
}

/// `dim(span a ∩ span b)` for two row sets in the same ambient space.
pub fn intersect_dim<F: Field>(field: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Result<usize> {
    if a.cols() != b.cols() {
        return Err(Error::AmbientMismatch { left: a.cols(), right: b.cols() });
    }
    Ok(rank(field, a) + rank(field, b) - rank(field, &a.vstack(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alg::{kernel, PrimeField, Ring, Sample};
    use crate::seeded_rng;

    fn random_rows(f: &PrimeField, rows: usize, cols: usize, seed: u64) -> Matrix<u64> {
        let mut rng = seeded_rng(seed);
        Matrix::from_rows(cols, (0..rows).map(|_| (0..cols).map(|_| f.random(&mut rng)).collect()).collect())
    }

    #[test]
    fn intersection_dimension_matches_kernel_oracle() {
        let f = PrimeField::new(1_000_003).unwrap();
        for seed in 0..10 {
            let a = random_rows(&f, 4, 7, seed);
            let b = random_rows(&f, 5, 7, seed + 100);
            // dim(A ∩ B) = dim ker([A; -B]^T) when the row sets are independent
            let mut stacked = a.clone();
            for r in b.row_iter() {
                stacked.push_row(r.iter().map(|x| f.neg(x)).collect());
            }
            let oracle = kernel(&f, &stacked.transpose()).len();
            assert_eq!(intersect_dim(&f, &a, &b).unwrap(), oracle);
            let sa = SubspaceBasis::from_rows(&f, &a);
            let sb = SubspaceBasis::from_rows(&f, &b);
            let cap = sa.intersection(&f, &sb).unwrap();
            assert_eq!(cap.rank(), oracle);
            assert!(cap.is_subspace_of(&f, &sa).unwrap());
            assert!(cap.is_subspace_of(&f, &sb).unwrap());
        }
    }

    #[test]
    fn ambient_mismatch_is_reported() {
        let f = PrimeField::new(101).unwrap();
        let a = Matrix::new(1, 3, 1u64);
        let b = Matrix::new(1, 4, 1u64);
        assert!(matches!(intersect_dim(&f, &a, &b), Err(Error::AmbientMismatch { left: 3, right: 4 })));
    }

    #[test]
    fn coordinate_subspaces() {
        let f = PrimeField::new(101).unwrap();
        let a = SubspaceBasis::coordinate(&f, 5, &[0, 2, 3]);
        let b = SubspaceBasis::coordinate(&f, 5, &[2, 3, 4]);
        assert_eq!(a.intersection(&f, &b).unwrap(), SubspaceBasis::coordinate(&f, 5, &[2, 3]));
        assert_eq!(a.join(&f, &b).unwrap().rank(), 4);
        assert!(a.contains(&f, &[1, 0, 7, 0, 0]).unwrap());
        assert!(!a.contains(&f, &[0, 1, 0, 0, 0]).unwrap());
    }

    #[test]
    fn coordinate_intersection_matches_zassenhaus() {
        let f = PrimeField::new(1_000_003).unwrap();
        for seed in 0..5 {
            let mut a = random_rows(&f, 6, 9, seed);
            // force a known vector supported on {0, 1, 2} into the span
            a.push_row(vec![3, 1, 4, 0, 0, 0, 0, 0, 0]);
            let sa = SubspaceBasis::from_rows(&f, &a);
            let support = [0, 1, 2, 5];
            let fast = sa.intersect_coordinate(&f, &support);
            let slow = sa.intersection(&f, &SubspaceBasis::coordinate(&f, 9, &support)).unwrap();
            assert_eq!(fast, slow);
            assert!(fast.rank() >= 1);
        }
    }
}
