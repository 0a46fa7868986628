//! Charts, embeddings and linear spaces attached to a flag variety
//! `F(k1,...,kr;n)` in its Plücker embedding, or to a product of
//! Grassmannians in its Segre-Plücker embedding.
//!
//! A chart point is a matrix with identity staircase blocks and free
//! parameter blocks. For a flag, rows `0..=k_i` span the `k_i`-dimensional
//! member of the flag and row `l` in band `i` has zeros in columns `0..=k_i`
//! except for the diagonal 1. For a product, factor `i` is `[I | X_i]`. The
//! all-zero chart point is the coordinate point `e_{I_1}` with
//! `I_1 = ({0..k_1}, ..., {0..k_r})`.

mod wellbehaved;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::RngCore;

use crate::alg::{leading_minors, rank, Field, JetRing, Matrix, Ring, Sample, SubspaceBasis};
use crate::error::{Error, Result};
use crate::index::{ball_positions, binomial, IndexSpace, MultiIndex};
use crate::shape::{FlagShape, Mode};

pub use self::wellbehaved::{derivative_rank, well_behaved_check, WellBehaved};

/// Extra sample points drawn beyond the expected span dimension.
pub const SPAN_MARGIN: usize = 8;

/// `dim F`: `(k1+1)(n-k1) + Σ_{j>=2} (n-k_j)(k_j-k_{j-1})` for a flag,
/// `Σ (k_i+1)(n-k_i)` for a product.
pub fn flag_dim(shape: &FlagShape) -> usize {
    shape.dim()
}

/// Dimension of the irreducible representation whose projectivization is
/// spanned by the flag variety, from the Weyl dimension formula with
/// `a_{k_i+1} = 1` (repeated `k` values add up).
pub fn weyl_dim(shape: &FlagShape) -> Result<u128> {
    if shape.mode() != Mode::Flag {
        return Err(Error::Precondition(format!("weyl_dim needs a flag shape, got {}", shape)));
    }
    let n = shape.n();
    let mut a = vec![0u64; n + 1];
    for &k in shape.ks() {
        a[k + 1] += 1;
    }
    let mut product = BigRational::one();
    for i in 1..=n + 1 {
        let mut partial = 0u64;
        for j in i + 1..=n + 1 {
            partial += a[j - 1];
            let len = (j - i) as u64;
            product *= BigRational::new(BigInt::from(partial + len), BigInt::from(len));
        }
    }
    if !product.is_integer() {
        return Err(Error::Inconsistency(format!("Weyl product for {} is not an integer: {}", shape, product)));
    }
    product.to_integer().to_u128().ok_or_else(|| Error::Overflow(format!("weyl_dim of {}", shape)))
}

/// Affine dimension of the linear span of the embedded variety: the Weyl
/// dimension for a flag, the full ambient size for a product.
pub fn span_size(shape: &FlagShape) -> Result<u128> {
    match shape.mode() {
        Mode::Flag => weyl_dim(shape),
        Mode::ProductOfGrassmannians => {
            shape.ambient_size().ok_or_else(|| Error::Overflow(format!("ambient size of {}", shape)))
        }
    }
}

/// Affine rank of the osculating space of order `s` of a product of
/// Grassmannians: `Σ_{s_i <= k_i+1, Σ s_i <= s} Π C(n-k_i, s_i) C(k_i+1, s_i)`.
pub fn osc_dim_formula(shape: &FlagShape, s: usize) -> Result<u128> {
    let n = shape.n();
    // counts[t] = number of multi-indices at exact distance t, built factor by factor
    let mut counts: Vec<u128> = vec![1];
    for &k in shape.ks() {
        let mut next = vec![0u128; counts.len() + k + 1];
        for (t, &c) in counts.iter().enumerate() {
            for si in 0..=k + 1 {
                let factor = binomial(n - k, si)
                    .and_then(|x| binomial(k + 1, si).and_then(|y| x.checked_mul(y)))
                    .ok_or_else(|| Error::Overflow("osculating dimension".into()))?;
                let term = c.checked_mul(factor).ok_or_else(|| Error::Overflow("osculating dimension".into()))?;
                next[t + si] = next[t + si].checked_add(term).ok_or_else(|| Error::Overflow("osculating dimension".into()))?;
            }
        }
        counts = next;
    }
    counts
        .iter()
        .take(s + 1)
        .try_fold(0u128, |acc, &c| acc.checked_add(c))
        .ok_or_else(|| Error::Overflow("osculating dimension".into()))
}

/// A chart point: parameter values plus an optional change of frame
/// `g ∈ GL(n+1)` applied on the right of every chart matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartPoint<E> {
    pub params: Vec<E>,
    pub frame: Option<Matrix<E>>,
}

impl<E> ChartPoint<E> {
    pub fn new(params: Vec<E>) -> Self {
        ChartPoint { params, frame: None }
    }
}

/// Positions `(matrix, row, column)` of the free chart parameters, in parameter order.
pub fn parameter_positions(shape: &FlagShape) -> Vec<(usize, usize, usize)> {
    let n = shape.n();
    let mut out = Vec::with_capacity(shape.dim());
    match shape.mode() {
        Mode::Flag => {
            for (row, band_k) in band_of_rows(shape).into_iter().enumerate() {
                for col in band_k + 1..=n {
                    out.push((0, row, col));
                }
            }
        }
        Mode::ProductOfGrassmannians => {
            for (i, &k) in shape.ks().iter().enumerate() {
                for row in 0..=k {
                    for col in k + 1..=n {
                        out.push((i, row, col));
                    }
                }
            }
        }
    }
    out
}

/// For each chart row of a flag, the `k_i` of the band it belongs to.
fn band_of_rows(shape: &FlagShape) -> Vec<usize> {
    (0..=shape.k_max()).map(|row| *shape.ks().iter().find(|&&k| row <= k).expect("row within k_r")).collect()
}

/// The chart matrices at the given parameter values (one matrix for a flag,
/// one per factor for a product).
pub fn chart_matrices<R: Ring>(ring: &R, shape: &FlagShape, params: &[R::Elem]) -> Result<Vec<Matrix<R::Elem>>> {
    if params.len() != shape.dim() {
        return Err(Error::Precondition(format!("{} expects {} chart parameters, got {}", shape, shape.dim(), params.len())));
    }
    let cols = shape.n() + 1;
    let mut mats: Vec<Matrix<R::Elem>> = match shape.mode() {
        Mode::Flag => vec![Matrix::new(shape.k_max() + 1, cols, ring.zero())],
        Mode::ProductOfGrassmannians => shape.ks().iter().map(|&k| Matrix::new(k + 1, cols, ring.zero())).collect(),
    };
    for m in mats.iter_mut() {
        for i in 0..m.rows() {
            m.set(i, i, ring.one());
        }
    }
    for (&(m, row, col), value) in parameter_positions(shape).iter().zip(params) {
        mats[m].set(row, col, value.clone());
    }
    Ok(mats)
}

/// Plücker-Segre coordinates `Z_J = Π_i det(rows 0..=k_i of M_i, columns J^i)`
/// in the canonical order of `Λ`.
pub fn embed_matrices<R: Ring>(ring: &R, shape: &FlagShape, mats: &[Matrix<R::Elem>]) -> Vec<R::Elem> {
    let parts: Vec<Vec<R::Elem>> = match shape.mode() {
        Mode::Flag => {
            let minors = leading_minors(ring, &mats[0], shape.k_max());
            shape.ks().iter().map(|&k| minors.levels[k].clone()).collect()
        }
        Mode::ProductOfGrassmannians => shape
            .ks()
            .iter()
            .zip(mats)
            .map(|(&k, m)| leading_minors(ring, m, k).levels.swap_remove(k))
            .collect(),
    };
    segre(ring, &parts)
}

/// Outer product of the factor coordinate vectors; the last factor varies fastest.
fn segre<R: Ring>(ring: &R, parts: &[Vec<R::Elem>]) -> Vec<R::Elem> {
    let mut acc = vec![ring.one()];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for a in &acc {
            if ring.is_zero(a) {
                next.extend(core::iter::repeat_n(ring.zero(), part.len()));
                continue;
            }
            next.extend(part.iter().map(|b| ring.mul(a, b)));
        }
        acc = next;
    }
    acc
}

/// A flag variety or product of Grassmannians over a fixed field.
#[derive(Debug, Clone)]
pub struct Variety<F> {
    field: F,
    shape: FlagShape,
    space: IndexSpace,
}

impl<F: Field + Sample + Clone> Variety<F> {
    pub fn new(field: F, shape: FlagShape) -> Result<Self> {
        let space = IndexSpace::new(&shape)?;
        Ok(Variety { field, shape, space })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn shape(&self) -> &FlagShape {
        &self.shape
    }

    pub fn space(&self) -> &IndexSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    /// Number of ambient coordinates `|Λ|`.
    pub fn ambient(&self) -> usize {
        self.space.len()
    }

    /// The chart origin, which embeds to `e_{I_1}`.
    pub fn origin(&self) -> ChartPoint<F::Elem> {
        ChartPoint::new(vec![self.field.zero(); self.dim()])
    }

    /// A random chart point, optionally moved by a random invertible frame.
    pub fn random_point(&self, rng: &mut dyn RngCore, with_frame: bool) -> ChartPoint<F::Elem> {
        let params = (0..self.dim()).map(|_| self.field.random(rng)).collect();
        let frame = with_frame.then(|| random_invertible(&self.field, self.shape.n() + 1, rng));
        ChartPoint { params, frame }
    }

    fn framed<R: Ring>(&self, ring: &R, mats: Vec<Matrix<R::Elem>>, frame: Option<&Matrix<R::Elem>>) -> Vec<Matrix<R::Elem>> {
        match frame {
            Some(g) => mats.iter().map(|m| m.mul(ring, g)).collect(),
            None => mats,
        }
    }

    /// The ambient coordinates of a chart point.
    pub fn embed(&self, point: &ChartPoint<F::Elem>) -> Result<Vec<F::Elem>> {
        let mats = chart_matrices(&self.field, &self.shape, &point.params)?;
        let mats = self.framed(&self.field, mats, point.frame.as_ref());
        Ok(embed_matrices(&self.field, &self.shape, &mats))
    }

    /// The embedded point followed by its partial derivatives in every chart
    /// parameter: `dim + 1` rows spanning the affine cone over the tangent space.
    pub fn tangent_rows(&self, point: &ChartPoint<F::Elem>) -> Result<Matrix<F::Elem>> {
        let v = self.dim();
        let jets = JetRing::new(self.field.clone(), v);
        let params: Vec<_> = point.params.iter().enumerate().map(|(i, x)| jets.variable(x.clone(), i)).collect();
        let mats = chart_matrices(&jets, &self.shape, &params)?;
        let frame = point.frame.as_ref().map(|g| g.map(|x| jets.constant(x.clone())));
        let mats = self.framed(&jets, mats, frame.as_ref());
        let coords = embed_matrices(&jets, &self.shape, &mats);
        let mut rows = Vec::with_capacity(v + 1);
        rows.push(coords.iter().map(|c| c.value.clone()).collect());
        for i in 0..v {
            rows.push(coords.iter().map(|c| c.grad[i].clone()).collect());
        }
        Ok(Matrix::from_rows(self.ambient(), rows))
    }

    pub fn tangent_basis(&self, point: &ChartPoint<F::Elem>) -> Result<SubspaceBasis<F::Elem>> {
        Ok(SubspaceBasis::from_rows(&self.field, &self.tangent_rows(point)?))
    }

    /// The affine cone over the linear span of the embedded variety.
    ///
    /// For a flag this is sampled: `weyl_dim + SPAN_MARGIN` random embedded
    /// points must have rank exactly `weyl_dim`, with one retry. A product of
    /// Grassmannians spans its whole ambient space.
    pub fn linear_span(&self, rng: &mut dyn RngCore) -> Result<SubspaceBasis<F::Elem>> {
        if self.shape.mode() == Mode::ProductOfGrassmannians {
            return Ok(SubspaceBasis::full(&self.field, self.ambient()));
        }
        let target = usize::try_from(weyl_dim(&self.shape)?).map_err(|_| Error::Overflow("weyl_dim".into()))?;
        let mut last = 0;
        for _ in 0..2 {
            let rows = (0..target + SPAN_MARGIN)
                .map(|_| self.embed(&self.random_point(rng, false)))
                .collect::<Result<Vec<_>>>()?;
            let span = SubspaceBasis::from_rows(&self.field, &Matrix::from_rows(self.ambient(), rows));
            if span.rank() == target {
                return Ok(span);
            }
            last = span.rank();
        }
        Err(Error::Inconsistency(format!(
            "sampled span of {} has rank {} but the Weyl dimension is {}",
            self.shape, last, target
        )))
    }

    /// The osculating space of order `s` at the coordinate point `e_I`:
    /// the coordinate subspace on the ball of radius `s`, intersected with
    /// `span` for a flag (`span` is ignored for a product).
    pub fn osculating_span(&self, span: &SubspaceBasis<F::Elem>, center: &MultiIndex, s: usize) -> Result<SubspaceBasis<F::Elem>> {
        let support = ball_positions(&self.space, center, s)?;
        match self.shape.mode() {
            Mode::ProductOfGrassmannians => Ok(SubspaceBasis::coordinate(&self.field, self.ambient(), &support)),
            Mode::Flag => {
                if !center.is_nested() {
                    return Err(Error::Precondition(format!("{:?} is not a point of the flag variety (parts not nested)", center)));
                }
                if span.ambient() != self.ambient() {
                    return Err(Error::AmbientMismatch { left: span.ambient(), right: self.ambient() });
                }
                Ok(span.intersect_coordinate(&self.field, &support))
            }
        }
    }

    /// Rank of the tangent space at a random point, which should be `dim + 1`.
    pub fn generic_tangent_rank(&self, rng: &mut dyn RngCore) -> Result<usize> {
        Ok(rank(&self.field, &self.tangent_rows(&self.random_point(rng, true))?))
    }
}

/// A uniformly random invertible `n x n` matrix.
pub fn random_invertible<F: Field + Sample>(field: &F, n: usize, rng: &mut dyn RngCore) -> Matrix<F::Elem> {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| field.random(rng)).collect()).collect();
        let m = Matrix::from_rows(n, rows);
        if rank(field, &m) == n {
            return m;
        }
    }
}
