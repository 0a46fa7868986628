//! Secant dimensions by Terracini's lemma.
//!
//! The affine cone over the span of `h` general tangent spaces has the
//! dimension of the affine cone over the `h`-secant variety. Points are random
//! chart points over `F_p` moved by a random frame; the rank at such a
//! specialization is a lower bound for the generic rank and an exact value
//! whenever it reaches the expected dimension.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::alg::{rank, Field, Matrix, PrimeField, Ring, Sample};
use crate::error::{Error, Result};
use crate::flag::{embed_matrices, span_size, Variety};
use crate::seeded_rng;
use crate::shape::FlagShape;

/// Default cap on the number of ambient coordinates.
pub const DEFAULT_CAP_AMBIENT: usize = 200_000;
/// Default cap on the number of stacked tangent rows `h (dim + 1)`.
pub const DEFAULT_CAP_ROWS: usize = 5_000;
/// Attempts at drawing a point whose tangent space has full rank.
const POINT_RETRIES: usize = 3;

/// Result of a secant dimension computation. Dimensions are projective.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectReport {
    pub shape: FlagShape,
    pub h: usize,
    pub expected_dim: u128,
    pub computed_dim: u128,
    pub defect: u128,
    /// Projective dimension of the linear span of the variety.
    pub ambient_dim: u128,
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
    /// Reproduced with a second prime and seed.
    pub certified: bool,
    /// The secant variety is the whole linear span.
    pub fills_ambient: bool,
    pub confirm_prime: Option<u64>,
}

/// Parameters of a Terracini run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TerraciniConfig {
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
    pub cap_ambient: usize,
    pub cap_rows: usize,
    pub force: bool,
}

impl Default for TerraciniConfig {
    fn default() -> Self {
        TerraciniConfig {
            prime: crate::DEFAULT_PRIME,
            seed: 0,
            trials: 3,
            cap_ambient: DEFAULT_CAP_AMBIENT,
            cap_rows: DEFAULT_CAP_ROWS,
            force: false,
        }
    }
}

/// Seed used for the confirming run derived from the primary seed.
pub fn confirm_seed(seed: u64) -> u64 {
    seed ^ 0x9E37_79B9_7F4A_7C15
}

/// Projective dimension of the linear span of the embedded variety.
pub fn ambient_projective_dim(shape: &FlagShape) -> Result<u128> {
    Ok(span_size(shape)? - 1)
}

/// `min(h dim + h - 1, N)` with `N` the projective dimension of the span.
pub fn expected_secant_dim(shape: &FlagShape, h: usize) -> Result<u128> {
    if h == 0 {
        return Err(Error::Precondition("h must be at least 1".into()));
    }
    let h = h as u128;
    let naive = h * shape.dim() as u128 + h - 1;
    Ok(naive.min(ambient_projective_dim(shape)?))
}

fn check_caps(shape: &FlagShape, h: usize, config: &TerraciniConfig) -> Result<()> {
    if config.force {
        return Ok(());
    }
    let ambient = shape.ambient_size().unwrap_or(u128::MAX);
    if ambient > config.cap_ambient as u128 {
        return Err(Error::CapExceeded(format!(
            "{} has {} ambient coordinates (cap {}); use --force",
            shape, ambient, config.cap_ambient
        )));
    }
    let rows = (h as u128) * (shape.dim() as u128 + 1);
    if rows > config.cap_rows as u128 {
        return Err(Error::CapExceeded(format!(
            "h = {} on {} needs {} tangent rows (cap {}); use --force",
            h, shape, rows, config.cap_rows
        )));
    }
    Ok(())
}

/// Tangent rows at a random point, redrawing when the tangent rank is short.
fn general_tangent<F: Field + Sample + Clone>(variety: &Variety<F>, rng: &mut dyn RngCore) -> Result<Matrix<F::Elem>> {
    let want = variety.dim() + 1;
    for _ in 0..POINT_RETRIES {
        let rows = variety.tangent_rows(&variety.random_point(rng, true))?;
        if rank(variety.field(), &rows) == want {
            return Ok(rows);
        }
    }
    Err(Error::SingularSample(format!(
        "tangent space of {} stayed below rank {} in {} draws",
        variety.shape(),
        want,
        POINT_RETRIES
    )))
}

/// Affine rank of the span of `h` general tangent spaces, maximized over trials.
pub fn terracini_rank<F: Field + Sample + Clone>(variety: &Variety<F>, h: usize, trials: usize, rng: &mut dyn RngCore) -> Result<usize> {
    let ceiling = usize::try_from(expected_secant_dim(variety.shape(), h)?).unwrap_or(usize::MAX).saturating_add(1);
    let mut best = 0;
    for _ in 0..trials.max(1) {
        let mut stack = Matrix::from_rows(variety.ambient(), Vec::new());
        for _ in 0..h {
            stack = stack.vstack(&general_tangent(variety, rng)?);
        }
        best = best.max(rank(variety.field(), &stack));
        if best >= ceiling {
            break;
        }
    }
    Ok(best)
}

/// Secant dimension over `F_prime` (not yet certified).
pub fn terracini_dim(shape: &FlagShape, h: usize, config: &TerraciniConfig) -> Result<DefectReport> {
    let expected_dim = expected_secant_dim(shape, h)?;
    let ambient_dim = ambient_projective_dim(shape)?;
    check_caps(shape, h, config)?;
    let variety = Variety::new(PrimeField::new(config.prime)?, shape.clone())?;
    let mut rng = seeded_rng(config.seed);
    let affine = terracini_rank(&variety, h, config.trials, &mut rng)? as u128;
    let computed_dim = affine.saturating_sub(1);
    if affine == 0 || computed_dim > expected_dim {
        return Err(Error::Inconsistency(format!(
            "{} h = {}: computed dimension {} exceeds expected {}",
            shape, h, computed_dim, expected_dim
        )));
    }
    Ok(DefectReport {
        shape: shape.clone(),
        h,
        expected_dim,
        computed_dim,
        defect: expected_dim - computed_dim,
        ambient_dim,
        prime: config.prime,
        seed: config.seed,
        trials: config.trials,
        certified: false,
        fills_ambient: computed_dim == ambient_dim,
        confirm_prime: None,
    })
}

/// Runs [`terracini_dim`] with the primary prime and again with
/// `confirm_prime` and [`confirm_seed`]; agreement certifies the report.
pub fn certified_terracini_dim(shape: &FlagShape, h: usize, config: &TerraciniConfig, confirm_prime: u64) -> Result<DefectReport> {
    let mut report = terracini_dim(shape, h, config)?;
    let second = terracini_dim(shape, h, &TerraciniConfig { prime: confirm_prime, seed: confirm_seed(config.seed), ..*config })?;
    if second.computed_dim != report.computed_dim {
        return Err(Error::Inconsistency(format!(
            "{} h = {}: prime {} gives {} but prime {} gives {}",
            shape, h, config.prime, report.computed_dim, confirm_prime, second.computed_dim
        )));
    }
    report.certified = true;
    report.confirm_prime = Some(confirm_prime);
    Ok(report)
}

/// One cell of a scan grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub shape: FlagShape,
    pub h: usize,
    pub report: Option<DefectReport>,
    pub error: Option<String>,
    /// The `(h-1)`-secant is already expected to fill the span.
    pub skipped: bool,
}

/// Lookup of previously computed reports.
pub trait ReportCache {
    /// A stored report for this key; when `confirm_prime` is set it must
    /// have been certified with that prime.
    fn get(&self, shape: &FlagShape, h: usize, config: &TerraciniConfig, confirm_prime: Option<u64>) -> Option<DefectReport>;
    fn put(&mut self, report: &DefectReport);
}

/// A cache that stores nothing.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoCache;

impl ReportCache for NoCache {
    fn get(&self, _: &FlagShape, _: usize, _: &TerraciniConfig, _: Option<u64>) -> Option<DefectReport> {
        None
    }

    fn put(&mut self, _: &DefectReport) {}
}

/// Whether a scan should skip `(shape, h)`: the `(h-1)`-secant is already
/// expected to fill the span, so nothing new can be learned.
pub fn scan_skips(shape: &FlagShape, h: usize) -> Result<bool> {
    if h <= 1 {
        return Ok(false);
    }
    Ok(expected_secant_dim(shape, h - 1)? == ambient_projective_dim(shape)?)
}

/// Computes one scan cell, recording errors instead of returning them.
pub fn scan_entry(shape: &FlagShape, h: usize, config: &TerraciniConfig, confirm_prime: Option<u64>) -> ScanEntry {
    let mut entry = ScanEntry { shape: shape.clone(), h, report: None, error: None, skipped: false };
    match scan_skips(shape, h) {
        Ok(true) if !config.force => {
            entry.skipped = true;
            return entry;
        }
        Err(e) => {
            entry.error = Some(format!("{}", e));
            return entry;
        }
        _ => {}
    }
    let result = match confirm_prime {
        Some(p) => certified_terracini_dim(shape, h, config, p),
        None => terracini_dim(shape, h, config),
    };
    match result {
        Ok(report) => entry.report = Some(report),
        Err(e) => entry.error = Some(format!("{}", e)),
    }
    entry
}

/// Runs [`scan_entry`] over `shapes x hs` in order, consulting `cache` and
/// stopping early when `keep_going` returns false.
pub fn defect_scan(
    shapes: &[FlagShape],
    hs: &[usize],
    config: &TerraciniConfig,
    confirm_prime: Option<u64>,
    cache: &mut dyn ReportCache,
    keep_going: &mut dyn FnMut(&ScanEntry) -> bool,
) -> Vec<ScanEntry> {
    let mut out = Vec::new();
    for shape in shapes {
        for &h in hs {
            let entry = match cache.get(shape, h, config, confirm_prime) {
                Some(report) => ScanEntry { shape: shape.clone(), h, report: Some(report), error: None, skipped: false },
                None => {
                    let entry = scan_entry(shape, h, config, confirm_prime);
                    if let Some(report) = &entry.report {
                        cache.put(report);
                    }
                    entry
                }
            };
            let go_on = keep_going(&entry);
            out.push(entry);
            if !go_on {
                return out;
            }
        }
    }
    out
}

/// Outcome of [`chordal_hypersurface_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordalCheck {
    pub n: usize,
    pub samples: usize,
    /// `Σ (-1)^i Z_{i, [n] \ {i}}` vanished on every sampled point of the flag.
    pub equation_vanishes: bool,
    /// The equation vanishes on the whole sampled linear span.
    pub equation_on_span: bool,
    pub span_rank: usize,
    pub expected_span_rank: usize,
    /// The equation is non-zero at a random pair `(p, H)` with `p` not in `H`.
    pub nonflag_nonzero: bool,
}

impl ChordalCheck {
    pub fn holds(&self) -> bool {
        self.equation_vanishes && self.equation_on_span && self.span_rank == self.expected_span_rank && self.nonflag_nonzero
    }
}

/// Number of sampled points in [`chordal_hypersurface_check`].
pub const CHORDAL_SAMPLES: usize = 50;

/// Checks that `F(0, n-1; n)` lies in the hyperplane
/// `Σ_i (-1)^i Z_{i, [n] \ {i}} = 0` of `P^n x P^n*`, and that this is its
/// only linear equation.
pub fn chordal_hypersurface_check(n: usize, prime: u64, seed: u64) -> Result<ChordalCheck> {
    if n < 2 {
        return Err(Error::Precondition(format!("chordal check needs n >= 2, got {}", n)));
    }
    let field = PrimeField::new(prime)?;
    let shape = FlagShape::flag(&[0, n - 1], n)?;
    let variety = Variety::new(field, shape)?;
    let equation = incidence_form(&field, &variety);
    let mut rng = seeded_rng(seed);

    let mut equation_vanishes = true;
    for _ in 0..CHORDAL_SAMPLES {
        let z = variety.embed(&variety.random_point(&mut rng, true))?;
        equation_vanishes &= field.is_zero(&dot(&field, &equation, &z));
    }
    let span = variety.linear_span(&mut rng)?;
    let equation_on_span = span.basis().row_iter().all(|row| field.is_zero(&dot(&field, &equation, row)));

    let product = Variety::new(field, FlagShape::product(&[0, n - 1], n)?)?;
    let random_rows = |rows: usize, rng: &mut dyn RngCore| {
        Matrix::from_rows(n + 1, (0..rows).map(|_| (0..=n).map(|_| field.random(rng)).collect()).collect())
    };
    let p = random_rows(1, &mut rng);
    let hyperplane = random_rows(n, &mut rng);
    let z = embed_matrices(&field, product.shape(), &[p, hyperplane]);
    let nonflag_nonzero = !field.is_zero(&dot(&field, &equation, &z));

    Ok(ChordalCheck {
        n,
        samples: CHORDAL_SAMPLES,
        equation_vanishes,
        equation_on_span,
        span_rank: span.rank(),
        expected_span_rank: (n + 1) * (n + 1) - 1,
        nonflag_nonzero,
    })
}

/// Coefficient vector of `Σ_i (-1)^i Z_{{i}, [n] \ {i}}` in ambient coordinates.
fn incidence_form<F: Field + Sample + Clone>(field: &F, variety: &Variety<F>) -> Vec<F::Elem> {
    let n = variety.shape().n();
    let mut form = alloc::vec![field.zero(); variety.ambient()];
    for (pos, index) in variety.space().iter().enumerate() {
        let (point, hyper) = (&index.parts()[0], &index.parts()[1]);
        let i = point.elems()[0];
        if hyper.elems().contains(&i) {
            continue;
        }
        debug_assert_eq!(hyper.len(), n);
        form[pos] = if i % 2 == 0 { field.one() } else { field.neg(&field.one()) };
    }
    form
}

fn dot<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter().zip(b).fold(field.zero(), |mut acc, (x, y)| {
        field.add_mul_assign(&mut acc, x, y);
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn shape(s: &str) -> FlagShape {
        s.parse().unwrap()
    }

    #[test]
    fn expected_dimensions() {
        assert_eq!(expected_secant_dim(&shape("0,2;3"), 2).unwrap(), 11);
        assert_eq!(expected_secant_dim(&shape("0,1;3"), 2).unwrap(), 11);
        for s in ["1;3", "0,1;3", "G:0,1;3"] {
            assert_eq!(expected_secant_dim(&shape(s), 1).unwrap(), shape(s).dim() as u128);
        }
        assert!(expected_secant_dim(&shape("1;3"), 0).is_err());
    }

    #[test]
    fn chordal_defects_of_point_hyperplane_flags() {
        let config = TerraciniConfig::default();
        let r = terracini_dim(&shape("0,2;3"), 2, &config).unwrap();
        assert_eq!((r.computed_dim, r.defect), (10, 1));
        let r = terracini_dim(&shape("0,1;3"), 2, &config).unwrap();
        assert_eq!((r.computed_dim, r.defect), (11, 0));
    }

    #[test]
    fn classical_defective_grassmannian() {
        let r = terracini_dim(&shape("2;6"), 3, &TerraciniConfig::default()).unwrap();
        assert_eq!((r.expected_dim, r.computed_dim, r.defect), (34, 33, 1));
    }

    #[test]
    fn certification_uses_second_prime() {
        let r = certified_terracini_dim(&shape("0,1;2"), 2, &TerraciniConfig::default(), crate::CONFIRM_PRIME).unwrap();
        assert!(r.certified);
        assert_eq!(r.confirm_prime, Some(crate::CONFIRM_PRIME));
        assert_eq!(r.defect, 1);
    }

    #[test]
    fn caps_are_enforced() {
        let config = TerraciniConfig { cap_rows: 10, ..TerraciniConfig::default() };
        assert!(matches!(terracini_dim(&shape("1;3"), 3, &config), Err(Error::CapExceeded(_))));
        let forced = TerraciniConfig { force: true, ..config };
        assert!(terracini_dim(&shape("1;3"), 3, &forced).is_ok());
    }

    #[test]
    fn scans() {
        let config = TerraciniConfig::default();
        let mut keep = |_: &ScanEntry| true;
        assert!(defect_scan(&[], &[1, 2], &config, None, &mut NoCache, &mut keep).is_empty());
        let shapes = vec![shape("0,1;3"), shape("1;4")];
        let entries = defect_scan(&shapes, &[1], &config, None, &mut NoCache, &mut keep);
        assert!(entries.iter().all(|e| e.report.as_ref().unwrap().defect == 0));
        let mut stop = |_: &ScanEntry| false;
        assert_eq!(defect_scan(&shapes, &[1, 2], &config, None, &mut NoCache, &mut stop).len(), 1);
    }

    #[test]
    fn chordal_hypersurface() {
        for (n, rank) in [(2, 8), (3, 15)] {
            let c = chordal_hypersurface_check(n, crate::DEFAULT_PRIME, 1).unwrap();
            assert!(c.holds(), "{:?}", c);
            assert_eq!(c.span_rank, rank);
        }
    }
}
