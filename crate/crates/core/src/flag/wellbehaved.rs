use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::RngCore;

use super::{chart_matrices, embed_matrices, Variety};
use crate::alg::{bareiss_rank, Field, MPolyRing, Matrix, Monomial, Sample};
use crate::error::{Error, Result};
use crate::index::staircase_point;
use crate::shape::{FlagShape, Mode};

/// The two ranks compared by [`well_behaved_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WellBehaved {
    pub order: usize,
    /// Rank over `Q` of all partial derivatives of order `<= s` at the chart origin.
    pub derivative_rank: usize,
    /// Rank of the coordinate ball of radius `s` intersected with the linear span.
    pub osculating_rank: usize,
}

impl WellBehaved {
    pub fn holds(&self) -> bool {
        self.derivative_rank == self.osculating_rank
    }
}

/// Rank over `Q` of the osculating space of order `s` at the chart origin,
/// computed from the Taylor coefficients of the parametrization.
///
/// Each coordinate is expanded as an integer polynomial in the chart
/// parameters. The partial derivative `∂^a φ(0)` equals `a!` times the
/// coefficient of `x^a`, so the span of derivatives of order `<= s` is the
/// span of the coefficient vectors of the monomials of degree `<= s`.
pub fn derivative_rank(shape: &FlagShape, s: usize) -> Result<usize> {
    let v = shape.dim();
    if v > u16::MAX as usize {
        return Err(Error::UnsupportedShape(format!("{} has too many chart parameters", shape)));
    }
    let ring = MPolyRing::new(v);
    let params: Vec<_> = (0..v).map(|i| ring.variable(i)).collect();
    let mats = chart_matrices(&ring, shape, &params)?;
    let coords = embed_matrices(&ring, shape, &mats);
    let ambient = coords.len();

    let mut rows: BTreeMap<Monomial, Vec<BigInt>> = BTreeMap::new();
    for (j, poly) in coords.iter().enumerate() {
        for (m, c) in poly.terms() {
            let degree: usize = m.iter().map(|&e| e as usize).sum();
            if degree > s {
                continue;
            }
            rows.entry(m.clone()).or_insert_with(|| vec![BigInt::default(); ambient])[j] = c.clone();
        }
    }
    Ok(bareiss_rank(&Matrix::from_rows(ambient, rows.into_values().collect())))
}

/// Checks that the osculating space of order `s` at `e_{I_1}` equals the
/// coordinate ball of radius `s` intersected with the linear span.
pub fn well_behaved_check<F>(variety: &Variety<F>, s: usize, rng: &mut dyn RngCore) -> Result<WellBehaved>
where
    F: Field + Sample + Clone,
{
    if variety.shape().mode() != Mode::Flag {
        return Err(Error::Precondition(format!("well_behaved_check needs a flag shape, got {}", variety.shape())));
    }
    let span = variety.linear_span(rng)?;
    let center = staircase_point(variety.shape(), 1)?;
    let osculating_rank = variety.osculating_span(&span, &center, s)?.rank();
    let derivative_rank = derivative_rank(variety.shape(), s)?;
    Ok(WellBehaved { order: s, derivative_rank, osculating_rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alg::PrimeField;
    use crate::seeded_rng;

    #[test]
    fn small_flags_are_well_behaved() {
        let f = PrimeField::new(crate::DEFAULT_PRIME).unwrap();
        let mut rng = seeded_rng(2);
        let var = Variety::new(f, "0,1;2".parse().unwrap()).unwrap();
        let one = well_behaved_check(&var, 1, &mut rng).unwrap();
        assert!(one.holds());
        assert_eq!(one.derivative_rank, var.dim() + 1);
        let top = well_behaved_check(&var, var.shape().diameter(), &mut rng).unwrap();
        assert!(top.holds());
        assert_eq!(top.derivative_rank, 8);
        let var = Variety::new(f, "0,1;3".parse().unwrap()).unwrap();
        assert!(well_behaved_check(&var, 2, &mut rng).unwrap().holds());
    }

    #[test]
    fn grassmannian_derivatives_fill_the_ball() {
        // G(1,3): the ball of radius 1 has 5 points, radius 2 is everything.
        let shape: FlagShape = "1;3".parse().unwrap();
        assert_eq!(derivative_rank(&shape, 0).unwrap(), 1);
        assert_eq!(derivative_rank(&shape, 1).unwrap(), 5);
        assert_eq!(derivative_rank(&shape, 2).unwrap(), 6);
    }
}
