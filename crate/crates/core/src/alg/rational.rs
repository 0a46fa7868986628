use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, RngCore};

use super::{Field, Matrix, Ring, Sample};

/// The rational numbers, with fraction-free elimination for ranks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn of_i64(&self, value: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(value))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn rank_of(&self, m: &Matrix<BigRational>) -> usize {
        let mut ints = Vec::with_capacity(m.rows());
        for row in m.row_iter() {
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            ints.push(row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect::<Vec<_>>());
        }
        bareiss_rank(&Matrix::from_rows(m.cols(), ints))
    }
}

impl Sample for Rationals {
    fn random(&self, rng: &mut dyn RngCore) -> BigRational {
        self.of_i64(rng.gen_range(-(1i64 << 40)..(1i64 << 40)))
    }
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(m: &Matrix<BigInt>) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = m.row_iter().map(|r| r.to_vec()).collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let value = &a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j];
                // exact: every entry is a minor of the original matrix
                a[i][j] = value / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alg::rank;

    fn int_matrix(rows: &[&[i64]]) -> Matrix<BigInt> {
        Matrix::from_rows(rows[0].len(), rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    #[test]
    fn bareiss_on_small_cases() {
        assert_eq!(bareiss_rank(&int_matrix(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(bareiss_rank(&int_matrix(&[&[0, 0, 3], &[0, 2, 1], &[5, 0, 0]])), 3);
        assert_eq!(bareiss_rank(&int_matrix(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(bareiss_rank(&int_matrix(&[&[2, 4, 6], &[1, 2, 3], &[1, 3, 5], &[0, 1, 2]])), 2);
    }

    #[test]
    fn rational_rank_clears_denominators() {
        let q = Rationals;
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let m = Matrix::from_rows(2, alloc::vec![alloc::vec![half.clone(), q.one()], alloc::vec![q.one(), q.of_i64(2)]]);
        assert_eq!(rank(&q, &m), 1);
        let mut copy = m.clone();
        assert_eq!(crate::alg::rref(&q, &mut copy).len(), 1);
    }
}
