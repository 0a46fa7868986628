//! Projections from spans of osculating spaces at coordinate points, and
//! flat-limit tests for osculating regularity along the staircase curves.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use crate::alg::{flat_limit, rank, Field, Matrix, Poly, PolyRing, Ring, Sample, SubspaceBasis};
use crate::error::{Error, Result};
use crate::flag::Variety;
use crate::index::{ball_positions, staircase_point, IndexSpace, MultiIndex};

/// Attempts at drawing a point for [`generic_finiteness`].
const FINITENESS_RETRIES: usize = 3;

/// The span `⟨T^{s_1}_{e_{I_1}}, ..., T^{s_m}_{e_{I_m}}⟩` at the first `m`
/// staircase points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionCenter<E> {
    pub points: Vec<MultiIndex>,
    pub orders: Vec<usize>,
    pub center: SubspaceBasis<E>,
    /// Positions `J` with `d(J, I_j) <= s_j` for some `j`, ascending.
    pub coordinate_support: Vec<usize>,
    /// Ambient coordinates outside the support.
    pub residual: usize,
}

/// Builds the projection center at the first `orders.len()` staircase points.
///
/// Orders must stay below the diameter `r + Σ k_i`, otherwise the center is
/// the whole span.
pub fn build_center<F>(variety: &Variety<F>, span: &SubspaceBasis<F::Elem>, orders: &[usize]) -> Result<ProjectionCenter<F::Elem>>
where
    F: Field + Sample + Clone,
{
    let shape = variety.shape();
    let m = orders.len();
    if m > shape.alpha() {
        return Err(Error::Precondition(format!("{} points requested but α = {} for {}", m, shape.alpha(), shape)));
    }
    if let Some(&s) = orders.iter().find(|&&s| s >= shape.diameter()) {
        return Err(Error::Precondition(format!(
            "osculating order {} is not below the diameter {} of {}",
            s,
            shape.diameter(),
            shape
        )));
    }
    let field = variety.field();
    let mut points = Vec::with_capacity(m);
    let mut center = SubspaceBasis::from_rows(field, &Matrix::from_rows(variety.ambient(), Vec::new()));
    let mut inside = vec![false; variety.ambient()];
    for (j, &s) in orders.iter().enumerate() {
        let point = staircase_point(shape, j + 1)?;
        center = center.join(field, &variety.osculating_span(span, &point, s)?)?;
        for pos in ball_positions(variety.space(), &point, s)? {
            inside[pos] = true;
        }
        points.push(point);
    }
    let coordinate_support: Vec<usize> = (0..variety.ambient()).filter(|&c| inside[c]).collect();
    let residual = variety.ambient() - coordinate_support.len();
    Ok(ProjectionCenter { points, orders: orders.to_vec(), center, coordinate_support, residual })
}

/// Certifies generic finiteness of the projection from the coordinate span
/// of the center's support: the differential at a random point keeps full
/// rank `dim + 1` after deleting the support columns.
pub fn generic_finiteness<F>(variety: &Variety<F>, center: &ProjectionCenter<F::Elem>, rng: &mut dyn RngCore) -> Result<bool>
where
    F: Field + Sample + Clone,
{
    let want = variety.dim() + 1;
    if center.residual < want - 1 {
        return Err(Error::Precondition(format!(
            "residual {} is smaller than dim {} of {}",
            center.residual,
            variety.dim(),
            variety.shape()
        )));
    }
    for _ in 0..FINITENESS_RETRIES {
        let rows = variety.tangent_rows(&variety.random_point(rng, false))?;
        if rank(variety.field(), &rows.delete_columns(&center.coordinate_support)) == want {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Outcome of a flat-limit containment test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatLimitCheck {
    /// Rank of the limit space (equal to the rank of the family at general `t`).
    pub limit_rank: usize,
    /// Order of the osculating space at `e_{I_1}` that should contain the limit.
    pub target_order: usize,
    pub target_rank: usize,
    pub contained: bool,
}

/// Strong 2-osculating regularity along `e_i ↦ e_i + t e_{i+k_r+1}` (`i <= k_r`):
/// the flat limit of `⟨T^{s1}_{e_{I_1}}, T^{s2}_{γ(t)}⟩` lies in `T^{s1+s2+1}_{e_{I_1}}`.
///
/// Orders whose sum reaches the diameter are accepted; the target is then the whole span.
pub fn strong2_flatlimit_check<F>(
    variety: &Variety<F>,
    span: &SubspaceBasis<F::Elem>,
    s1: usize,
    s2: usize,
    rng: &mut dyn RngCore,
) -> Result<FlatLimitCheck>
where
    F: Field + Sample + Clone,
{
    if variety.shape().alpha() < 2 {
        return Err(Error::UnsupportedShape(format!("{} has α < 2", variety.shape())));
    }
    limit_check(variety, span, s1, &[(2, s2)], s1 + s2 + 1, rng)
}

/// α-osculating regularity: the flat limit of
/// `⟨T^s_{e_{I_1}}, T^s_{γ_2(t)}, ..., T^s_{γ_α(t)}⟩` lies in `T^{2s+1}_{e_{I_1}}`,
/// where `γ_j` moves the first block onto the `j`-th staircase block.
pub fn alpha_osc_flatlimit_check<F>(variety: &Variety<F>, span: &SubspaceBasis<F::Elem>, s: usize, rng: &mut dyn RngCore) -> Result<FlatLimitCheck>
where
    F: Field + Sample + Clone,
{
    let alpha = variety.shape().alpha();
    if alpha < 2 {
        return Err(Error::UnsupportedShape(format!("{} has α < 2", variety.shape())));
    }
    let curves: Vec<(usize, usize)> = (2..=alpha).map(|j| (j, s)).collect();
    limit_check(variety, span, s, &curves, 2 * s + 1, rng)
}

fn limit_check<F>(
    variety: &Variety<F>,
    span: &SubspaceBasis<F::Elem>,
    s1: usize,
    curves: &[(usize, usize)],
    target_order: usize,
    rng: &mut dyn RngCore,
) -> Result<FlatLimitCheck>
where
    F: Field + Sample + Clone,
{
    let field = variety.field();
    let ring = PolyRing::new(field.clone());
    let i1 = staircase_point(variety.shape(), 1)?;
    let block = variety.shape().k_max() + 1;

    let mut rows: Vec<Vec<Poly<F::Elem>>> = Vec::new();
    let base = variety.osculating_span(span, &i1, s1)?;
    for row in base.basis().row_iter() {
        rows.push(row.iter().map(|x| ring.constant(x.clone())).collect());
    }
    for &(j, s) in curves {
        let moved = variety.osculating_span(span, &i1, s)?;
        let shift = block * (j - 1);
        for row in moved.basis().row_iter() {
            rows.push(curve_image(&ring, variety.space(), row, block, shift));
        }
    }
    let family = Matrix::from_rows(variety.ambient(), rows);
    let limit = flat_limit(field, &family, rng)?;

    let target_order = target_order.min(variety.shape().diameter());
    let target = variety.osculating_span(span, &i1, target_order)?;
    Ok(FlatLimitCheck {
        limit_rank: limit.rank(),
        target_order,
        target_rank: target.rank(),
        contained: limit.is_subspace_of(field, &target)?,
    })
}

/// Image of a constant ambient vector under the map induced by
/// `e_i ↦ e_i + t e_{i+shift}` for `i < block`, with entries in `F[t]`.
fn curve_image<R: Ring>(ring: &PolyRing<R>, space: &IndexSpace, v: &[R::Elem], block: usize, shift: usize) -> Vec<Poly<R::Elem>> {
    let base = ring.base();
    let degree_cap: usize = space.shape().ks().iter().map(|k| k + 1).sum();
    let mut coeffs: Vec<Vec<R::Elem>> = vec![Vec::new(); v.len()];
    for (pos, value) in v.iter().enumerate() {
        if base.is_zero(value) {
            continue;
        }
        let index = space.at(pos);
        for (target, sign, degree) in wedge_expansion(&index, block, shift) {
            let cell = &mut coeffs[space.position(&target)];
            if cell.is_empty() {
                cell.resize(degree_cap + 1, base.zero());
            }
            let term = if sign { value.clone() } else { base.neg(value) };
            cell[degree] = base.add(&cell[degree], &term);
        }
    }
    coeffs.into_iter().map(|c| ring.from_coeffs(c)).collect()
}

/// Expands `⊗_i ∧_{j ∈ J^i} g e_j` into signed multi-indices with their power of `t`.
fn wedge_expansion(index: &MultiIndex, block: usize, shift: usize) -> Vec<(MultiIndex, bool, usize)> {
    let mut acc: Vec<(Vec<Vec<usize>>, bool, usize)> = vec![(Vec::new(), true, 0)];
    for part in index.parts() {
        let mut options: Vec<(Vec<usize>, bool, usize)> = vec![(Vec::new(), true, 0)];
        for &e in part.elems() {
            let mut next = Vec::with_capacity(options.len() * 2);
            for (elems, sign, deg) in options {
                let mut stay = elems.clone();
                stay.push(e);
                next.push((stay, sign, deg));
                if e < block {
                    let mut moved = elems;
                    moved.push(e + shift);
                    next.push((moved, sign, deg + 1));
                }
            }
            options = next;
        }
        let mut sorted_options = Vec::with_capacity(options.len());
        for (elems, sign, deg) in options {
            if let Some((sorted, parity)) = sort_with_parity(elems) {
                sorted_options.push((sorted, sign ^ parity, deg));
            }
        }
        let mut next = Vec::with_capacity(acc.len() * sorted_options.len());
        for (parts, sign, deg) in &acc {
            for (elems, s, d) in &sorted_options {
                let mut parts = parts.clone();
                parts.push(elems.clone());
                next.push((parts, sign == s, deg + d));
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(parts, sign, deg)| (MultiIndex::from_sorted_parts(parts), sign, deg)).collect()
}

/// Sorts `elems`, returning `None` on a repeated element and otherwise the
/// sorted vector with `true` when the permutation is odd.
fn sort_with_parity(mut elems: Vec<usize>) -> Option<(Vec<usize>, bool)> {
    let mut odd = false;
    for i in 1..elems.len() {
        let mut j = i;
        while j > 0 && elems[j - 1] > elems[j] {
            elems.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if elems.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((elems, odd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alg::PrimeField;
    use crate::shape::FlagShape;
    use crate::seeded_rng;

    fn setup(s: &str) -> (Variety<PrimeField>, SubspaceBasis<u64>) {
        let f = PrimeField::new(crate::DEFAULT_PRIME).unwrap();
        let var = Variety::new(f, s.parse::<FlagShape>().unwrap()).unwrap();
        let span = var.linear_span(&mut seeded_rng(9)).unwrap();
        (var, span)
    }

    #[test]
    fn centers() {
        let (var, span) = setup("1;3");
        let c = build_center(&var, &span, &[0]).unwrap();
        assert_eq!((c.center.rank(), c.residual), (1, 5));
        let c = build_center(&var, &span, &[1]).unwrap();
        assert_eq!((c.coordinate_support.len(), c.residual), (5, 1));
        assert!(build_center(&var, &span, &[2]).is_err());
        assert!(build_center(&var, &span, &[0, 0, 0]).is_err());

        let (var, span) = setup("G:0,1;3");
        let c = build_center(&var, &span, &[1, 1]).unwrap();
        // enumerate the union of the two unit balls directly
        let (p1, p2) = (staircase_point(var.shape(), 1).unwrap(), staircase_point(var.shape(), 2).unwrap());
        let union = var
            .space()
            .iter()
            .filter(|j| crate::index::distance(&p1, j).unwrap() <= 1 || crate::index::distance(&p2, j).unwrap() <= 1)
            .count();
        assert_eq!(c.coordinate_support.len(), union);
        assert_eq!(c.residual, 24 - union);
        assert_eq!(c.center.rank(), union);
    }

    #[test]
    fn centers_are_nested_in_the_order() {
        let (var, span) = setup("0,1;3");
        for s in 0..2 {
            let small = build_center(&var, &span, &[s]).unwrap();
            let big = build_center(&var, &span, &[s + 1]).unwrap();
            assert!(small.center.is_subspace_of(var.field(), &big.center).unwrap());
        }
    }

    #[test]
    fn finiteness() {
        let mut rng = seeded_rng(4);
        let (var, span) = setup("1;3");
        let c = build_center(&var, &span, &[0]).unwrap();
        assert!(generic_finiteness(&var, &c, &mut rng).unwrap());
        let c = build_center(&var, &span, &[1]).unwrap();
        assert!(matches!(generic_finiteness(&var, &c, &mut rng), Err(Error::Precondition(_))));

        let (var, span) = setup("0,1;3");
        let c = build_center(&var, &span, &[1]).unwrap();
        assert!(generic_finiteness(&var, &c, &mut rng).unwrap());
    }

    #[test]
    fn wedge_expansion_of_a_line() {
        // e0 ∧ e1 under e_i -> e_i + t e_{i+2}: e01 + t(e03 - e12) ... with e21 = -e12
        let shape: FlagShape = "1;3".parse().unwrap();
        let index = MultiIndex::from_parts(&[&[0, 1]], &shape).unwrap();
        let mut terms: Vec<_> = wedge_expansion(&index, 2, 2)
            .into_iter()
            .map(|(m, s, d)| (m.parts()[0].elems().to_vec(), s, d))
            .collect();
        terms.sort();
        assert_eq!(terms, vec![(vec![0, 1], true, 0), (vec![0, 3], true, 1), (vec![1, 2], false, 1), (vec![2, 3], true, 2)]);
    }

    #[test]
    fn strong_two_on_g13() {
        let mut rng = seeded_rng(1);
        let (var, span) = setup("1;3");
        for (s1, s2) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let c = strong2_flatlimit_check(&var, &span, s1, s2, &mut rng).unwrap();
            assert!(c.contained, "{} {} {:?}", s1, s2, c);
        }
        let c = strong2_flatlimit_check(&var, &span, 0, 0, &mut rng).unwrap();
        assert_eq!((c.limit_rank, c.target_order), (2, 1));
    }

    #[test]
    fn strong_two_on_small_flag() {
        let mut rng = seeded_rng(1);
        let (var, span) = setup("0,1;3");
        let c = strong2_flatlimit_check(&var, &span, 1, 1, &mut rng).unwrap();
        assert!(c.contained);
        assert_eq!(c.target_order, 3);
    }

    #[test]
    fn alpha_regularity_on_g15() {
        let mut rng = seeded_rng(1);
        let (var, span) = setup("1;5");
        let c = alpha_osc_flatlimit_check(&var, &span, 0, &mut rng).unwrap();
        assert!(c.contained);
        assert_eq!(c.limit_rank, 3);
        assert!(alpha_osc_flatlimit_check(&var, &span, 1, &mut rng).unwrap().contained);
    }

    #[test]
    fn too_small_targets_are_rejected() {
        let mut rng = seeded_rng(1);
        let (var, span) = setup("0,1;5");
        let right = limit_check(&var, &span, 1, &[(2, 0)], 2, &mut rng).unwrap();
        assert!(right.contained);
        let wrong = limit_check(&var, &span, 1, &[(2, 0)], 1, &mut rng).unwrap();
        assert!(!wrong.contained);
        assert_eq!(right.limit_rank, wrong.limit_rank);
    }
}
