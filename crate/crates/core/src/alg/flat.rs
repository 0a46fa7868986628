use alloc::format;
use alloc::vec::Vec;

use rand::RngCore;

use super::{rank, Field, Matrix, Poly, PolyRing, Ring, Sample, SubspaceBasis};
use crate::error::{Error, Result};

/// The limit at `t = 0` of the row spaces of a matrix with entries in `F[t]`.
///
/// Rows that are dependent over `F(t)` are discarded first (detected at a
/// random specialization). The remaining rows are brought into a form whose
/// constant-term vectors are independent, using only row operations with
/// constant coefficients and division of a whole row by a power of `t`. The
/// span of those constant terms is the limit.
pub fn flat_limit<F>(field: &F, rows: &Matrix<Poly<F::Elem>>, rng: &mut dyn RngCore) -> Result<SubspaceBasis<F::Elem>>
where
    F: Field + Sample + Clone,
{
    let ring = PolyRing::new(field.clone());
    let cols = rows.cols();

    let independent = generic_rows(field, &ring, rows, rng);
    let generic_rank = independent.len();

    let mut bound = 0usize;
    let mut pending: Vec<Vec<Poly<F::Elem>>> = Vec::with_capacity(generic_rank);
    for row in independent {
        let row = strip_valuation(&ring, row)?;
        bound += row.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
        pending.push(row);
    }

    let mut accepted: Vec<(usize, Vec<Poly<F::Elem>>)> = Vec::with_capacity(generic_rank);
    let mut shifted = 0usize;
    for mut row in pending {
        loop {
            for (pivot, acc) in &accepted {
                let c = ring.coeff(&row[*pivot], 0);
                if field.is_zero(&c) {
                    continue;
                }
                let c = ring.constant(field.neg(&c));
                for (x, y) in row.iter_mut().zip(acc) {
                    *x = ring.add(x, &ring.mul(&c, y));
                }
            }
            let lead = (0..cols).find(|&j| !field.is_zero(&ring.coeff(&row[j], 0)));
            match lead {
                Some(pivot) => {
                    let inv = field.inv(&ring.coeff(&row[pivot], 0)).expect("lead is non-zero");
                    let row = row.iter().map(|p| ring.scale(p, &inv)).collect();
                    accepted.push((pivot, row));
                    break;
                }
                None => {
                    let v = row_valuation(&ring, &row).ok_or_else(|| {
                        Error::Inconsistency("row vanished during flat limit: input rows are dependent".into())
                    })?;
                    shifted += v;
                    if shifted > bound {
                        return Err(Error::Inconsistency(format!(
                            "flat limit shifted t-valuation by {} which exceeds the bound {}",
                            shifted, bound
                        )));
                    }
                    row = row.iter().map(|p| ring.shift_down(p, v)).collect();
                }
            }
        }
    }

    let leads: Vec<Vec<F::Elem>> =
        accepted.iter().map(|(_, row)| row.iter().map(|p| ring.coeff(p, 0)).collect()).collect();
    let limit = SubspaceBasis::from_rows(field, &Matrix::from_rows(cols, leads));
    if limit.rank() != generic_rank {
        return Err(Error::Inconsistency(format!(
            "flat limit has rank {} but the family has generic rank {}",
            limit.rank(),
            generic_rank
        )));
    }
    Ok(limit)
}

fn row_valuation<R: Ring>(ring: &PolyRing<R>, row: &[Poly<R::Elem>]) -> Option<usize> {
    row.iter().filter_map(|p| ring.valuation(p)).min()
}

fn strip_valuation<R: Ring>(ring: &PolyRing<R>, row: Vec<Poly<R::Elem>>) -> Result<Vec<Poly<R::Elem>>> {
    let v = row_valuation(ring, &row)
        .ok_or_else(|| Error::Inconsistency("zero row survived generic row selection".into()))?;
    Ok(row.iter().map(|p| ring.shift_down(p, v)).collect())
}

/// Picks a maximal set of rows independent over `F(t)`, judged at the better
/// of two random specializations.
fn generic_rows<F>(field: &F, ring: &PolyRing<F>, rows: &Matrix<Poly<F::Elem>>, rng: &mut dyn RngCore) -> Vec<Vec<Poly<F::Elem>>>
where
    F: Field + Sample + Clone,
{
    let mut best: Option<(usize, Matrix<F::Elem>)> = None;
    for _ in 0..2 {
        let t0 = field.random_nonzero(rng);
        let specialized = rows.map(|p| ring.eval(p, &t0));
        let r = rank(field, &specialized);
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, specialized));
        }
    }
    let Some((_, specialized)) = best else {
        return Vec::new();
    };
    let mut chosen = Vec::new();
    let mut span = SubspaceBasis::from_rows(field, &Matrix::from_rows(rows.cols(), Vec::new()));
    for i in 0..rows.rows() {
        let v = specialized.row(i);
        if !span.contains(field, v).expect("same ambient") {
            span = SubspaceBasis::from_rows(field, &span.basis().vstack(&Matrix::from_rows(rows.cols(), alloc::vec![v.to_vec()])));
            chosen.push(rows.row(i).to_vec());
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alg::PrimeField;
    use crate::seeded_rng;
    use alloc::vec;

    fn setup() -> (PrimeField, PolyRing<PrimeField>) {
        let f = PrimeField::new(1_000_003).unwrap();
        (f, PolyRing::new(f))
    }

    fn p(ring: &PolyRing<PrimeField>, coeffs: &[i64]) -> Poly<u64> {
        ring.from_coeffs(coeffs.iter().map(|&c| ring.base().of_i64(c)).collect())
    }

    #[test]
    fn already_independent_at_zero() {
        let (f, r) = setup();
        let m = Matrix::from_rows(2, vec![vec![p(&r, &[1]), p(&r, &[])], vec![p(&r, &[0, 1]), p(&r, &[1])]]);
        let lim = flat_limit(&f, &m, &mut seeded_rng(1)).unwrap();
        assert_eq!(lim, SubspaceBasis::full(&f, 2));
    }

    #[test]
    fn difference_rescales() {
        let (f, r) = setup();
        let m = Matrix::from_rows(2, vec![vec![p(&r, &[1]), p(&r, &[0, 1])], vec![p(&r, &[1]), p(&r, &[0, 2])]]);
        let lim = flat_limit(&f, &m, &mut seeded_rng(1)).unwrap();
        assert_eq!(lim, SubspaceBasis::full(&f, 2));
    }

    #[test]
    fn content_removal() {
        let (f, r) = setup();
        let m = Matrix::from_rows(2, vec![vec![p(&r, &[0, 0, 1]), p(&r, &[0, 0, 0, 1])]]);
        let lim = flat_limit(&f, &m, &mut seeded_rng(1)).unwrap();
        assert_eq!(lim, SubspaceBasis::coordinate(&f, 2, &[0]));
    }

    #[test]
    fn dependent_rows_are_dropped() {
        let (f, r) = setup();
        let row = vec![p(&r, &[1, 1]), p(&r, &[0, 3]), p(&r, &[2])];
        let m = Matrix::from_rows(3, vec![row.clone(), row.iter().map(|x| r.scale(x, &5)).collect()]);
        let lim = flat_limit(&f, &m, &mut seeded_rng(1)).unwrap();
        assert_eq!(lim.rank(), 1);
    }

    #[test]
    fn secant_line_tends_to_tangent() {
        // span{(1, 0, 0), (1, t, t^2)} -> span{(1,0,0), (0,1,0)}
        let (f, r) = setup();
        let m = Matrix::from_rows(
            3,
            vec![vec![p(&r, &[1]), p(&r, &[]), p(&r, &[])], vec![p(&r, &[1]), p(&r, &[0, 1]), p(&r, &[0, 0, 1])]],
        );
        let lim = flat_limit(&f, &m, &mut seeded_rng(1)).unwrap();
        assert_eq!(lim, SubspaceBasis::coordinate(&f, 3, &[0, 1]));
    }
}
