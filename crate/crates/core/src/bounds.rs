//! Closed-form non-defectivity and identifiability bounds.
//!
//! Every bound is reported as `h_max`: the variety is not `(h+1)`-defective
//! for all `h <= h_max`. A value of 0 means the bound says nothing.

use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::h_m;
use crate::shape::{FlagShape, Mode};

/// Which theorem produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    ProductLargeN,
    ProductSmallN,
    FlagLargeN,
    FlagSmallN,
    ReducedFlag,
    Asymptotic,
}

/// Quantities entering a bound; absent fields do not apply to the regime.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundParameters {
    pub alpha: Option<u64>,
    /// `r - 2 + Σ k_i` (only negative for a projective space).
    pub s: Option<i64>,
    /// `Σ s_i' - 2`, possibly negative.
    pub s_prime: Option<i64>,
    pub h_alpha_s: Option<u128>,
    pub h_alpha_s_prime: Option<u128>,
    /// Index `l = max { j : n >= 2 k_j + 1 }` (1-based).
    pub l: Option<usize>,
    /// Exact base and exponent of a power bound.
    pub base: Option<String>,
    pub exponent: Option<u32>,
}

/// A non-defectivity bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub shape: FlagShape,
    pub regime: Option<Regime>,
    pub h_max: u128,
    pub parameters: BoundParameters,
    pub applicable: bool,
    pub note: Option<String>,
}

impl BoundReport {
    fn not_applicable(shape: &FlagShape, note: String) -> Self {
        BoundReport {
            shape: shape.clone(),
            regime: None,
            h_max: 0,
            parameters: BoundParameters::default(),
            applicable: false,
            note: Some(note),
        }
    }
}

fn overflow(what: &str) -> Error {
    Error::Overflow(what.to_string())
}

fn mul(a: u128, b: u128) -> Result<u128> {
    a.checked_mul(b).ok_or_else(|| overflow("bound"))
}

fn add(a: u128, b: u128) -> Result<u128> {
    a.checked_add(b).ok_or_else(|| overflow("bound"))
}

/// `h_α` of a possibly negative argument, which contributes nothing.
fn h_clamped(alpha: u64, s: i64) -> Result<u128> {
    if s <= 0 {
        Ok(0)
    } else {
        h_m(alpha, s as u64)
    }
}

fn check_room(shape: &FlagShape) -> Option<String> {
    (!shape.has_room_for_two_points())
        .then(|| format!("{} has n < 2 k_r + 1", shape))
}

/// Bound for a product of Grassmannians (needs `n >= 2 k_r + 1`).
///
/// Large `n` (`n >= k_r^2 + 3 k_r + 1`): `α h_α(s)`; otherwise
/// `(α - 1) h_α(s) + h_α(s')` with `s' = Σ s_i' - 2`,
/// `s_i' = min(k_i + 1, n - α(k_i + 1))` for `i < r` and
/// `s_r' = min(k_r, n - α k_r - 1)`.
pub fn product_bound(shape: &FlagShape) -> Result<BoundReport> {
    if shape.mode() != Mode::ProductOfGrassmannians && shape.r() > 1 {
        return Err(Error::Precondition(format!("product_bound needs a product shape, got {}", shape)));
    }
    if let Some(note) = check_room(shape) {
        return Ok(BoundReport::not_applicable(shape, note));
    }
    let alpha = shape.alpha() as u64;
    let s = (shape.r() + shape.k_sum()) as i64 - 2;
    let h_s = h_clamped(alpha, s)?;
    let mut parameters =
        BoundParameters { alpha: Some(alpha), s: Some(s), h_alpha_s: Some(h_s), ..BoundParameters::default() };
    let (regime, h_max) = if shape.is_large_n() {
        (Regime::ProductLargeN, mul(alpha as u128, h_s)?)
    } else {
        let n = shape.n() as i64;
        let a = alpha as i64;
        let r = shape.r();
        let s_prime: i64 = shape
            .ks()
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let k = k as i64;
                if i + 1 < r {
                    (k + 1).min(n - a * (k + 1))
                } else {
                    k.min(n - a * k - 1)
                }
            })
            .sum::<i64>()
            - 2;
        let h_sp = h_clamped(alpha, s_prime)?;
        parameters.s_prime = Some(s_prime);
        parameters.h_alpha_s_prime = Some(h_sp);
        (Regime::ProductSmallN, add(mul(alpha as u128 - 1, h_s)?, h_sp)?)
    };
    Ok(BoundReport { shape: shape.clone(), regime: Some(regime), h_max, parameters, applicable: true, note: None })
}

/// Bound for a flag variety with `n >= 2 k_r + 1`: `α h_α(s)` for large `n`,
/// `(α - 1) h_α(s)` otherwise, with `s = r - 2 + Σ k_i`.
pub fn flag_bound(shape: &FlagShape) -> Result<BoundReport> {
    if let Some(note) = check_room(shape) {
        return Ok(BoundReport::not_applicable(shape, format!("{}; use reduced_flag_bound", note)));
    }
    let alpha = shape.alpha() as u64;
    let s = (shape.r() + shape.k_sum()) as i64 - 2;
    let h_s = h_clamped(alpha, s)?;
    let parameters = BoundParameters { alpha: Some(alpha), s: Some(s), h_alpha_s: Some(h_s), ..BoundParameters::default() };
    let (regime, h_max) = if shape.is_large_n() {
        (Regime::FlagLargeN, mul(alpha as u128, h_s)?)
    } else {
        (Regime::FlagSmallN, mul(alpha as u128 - 1, h_s)?)
    };
    Ok(BoundReport { shape: shape.clone(), regime: Some(regime), h_max, parameters, applicable: true, note: None })
}

/// `floor(base^exponent)` with `exponent = floor(log2(m))`; `m = 0` yields no bound.
fn power_bound(base: &BigRational, m: usize) -> Result<(u128, Option<u32>)> {
    if m == 0 {
        return Ok((0, None));
    }
    let exponent = usize::BITS - 1 - m.leading_zeros();
    let value = num_traits::pow::pow(base.clone(), exponent as usize);
    let h = value.floor().to_integer().to_u128().ok_or_else(|| overflow("power bound"))?;
    Ok((h, Some(exponent)))
}

fn base_ratio(n: usize, k: usize) -> BigRational {
    BigRational::new(BigInt::from(n + 1), BigInt::from(k + 1))
}

/// Bound for a flag with `n < 2 k_r + 1`, through the projection onto the
/// first `l` members, `l = max { j : n >= 2 k_j + 1 }`:
/// `floor(((n+1)/(k_l+1))^floor(log2(Σ_{j<=l} k_j + l - 1)))`.
pub fn reduced_flag_bound(shape: &FlagShape) -> Result<BoundReport> {
    let n = shape.n();
    let Some(l) = shape.ks().iter().rposition(|&k| n > 2 * k).map(|i| i + 1) else {
        return Ok(BoundReport::not_applicable(shape, format!("{} has n < 2 k_1 + 1", shape)));
    };
    let k_l = shape.ks()[l - 1];
    let m = shape.ks()[..l].iter().sum::<usize>() + l - 1;
    let base = base_ratio(n, k_l);
    let (h_max, exponent) = power_bound(&base, m)?;
    let note = exponent.is_none().then(|| "log2(0): the bound is vacuous".to_string());
    Ok(BoundReport {
        shape: shape.clone(),
        regime: Some(Regime::ReducedFlag),
        h_max,
        parameters: BoundParameters { l: Some(l), base: Some(base.to_string()), exponent, ..BoundParameters::default() },
        applicable: true,
        note,
    })
}

/// `floor(((n+1)/(k_r+1))^floor(log2(Σ k_j + r - 1)))` for `n >= 2 k_r + 1`.
pub fn asymptotic_bound(shape: &FlagShape) -> Result<BoundReport> {
    if let Some(note) = check_room(shape) {
        return Ok(BoundReport::not_applicable(shape, note));
    }
    let base = base_ratio(shape.n(), shape.k_max());
    let m = shape.k_sum() + shape.r() - 1;
    let (h_max, exponent) = power_bound(&base, m)?;
    let note = exponent.is_none().then(|| "log2(0): the bound is vacuous".to_string());
    Ok(BoundReport {
        shape: shape.clone(),
        regime: Some(Regime::Asymptotic),
        h_max,
        parameters: BoundParameters { base: Some(base.to_string()), exponent, ..BoundParameters::default() },
        applicable: true,
        note,
    })
}

/// The theorem bound appropriate for a shape: [`product_bound`] for a
/// product, [`flag_bound`] or [`reduced_flag_bound`] for a flag.
pub fn nondefectivity(shape: &FlagShape) -> Result<BoundReport> {
    match shape.mode() {
        Mode::ProductOfGrassmannians => product_bound(shape),
        Mode::Flag if shape.has_room_for_two_points() => flag_bound(shape),
        Mode::Flag => reduced_flag_bound(shape),
    }
}

/// How the dimension side of the identifiability gate is read for products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum GateReading {
    /// `2 dim - 1` with `dim = Σ (k_i + 1)(n - k_i)`.
    #[default]
    Dimension,
    /// `2 Π (k_i + 1)(n - k_i) - 1`.
    Literal,
}

/// Result of the identifiability criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentifiabilityReport {
    pub shape: FlagShape,
    pub reading: GateReading,
    /// Left side of the gate.
    pub gate: u128,
    /// The real bound `B`, as an exact fraction.
    pub bound: String,
    pub regime: Option<Regime>,
    pub applicable: bool,
    /// `floor(B)` when applicable, else 0.
    pub h_max: u128,
}

/// `h`-identifiability for `h <= floor(B)` whenever `gate <= B`, where `B`
/// is the asymptotic bound (or the reduced one for a flag with
/// `n < 2 k_r + 1`) and `gate = 2 dim - 1`.
pub fn identifiability_bound(shape: &FlagShape, reading: GateReading) -> Result<IdentifiabilityReport> {
    let gate = match (shape.mode(), reading) {
        (Mode::ProductOfGrassmannians, GateReading::Literal) => {
            let n = shape.n() as u128;
            let prod = shape
                .ks()
                .iter()
                .try_fold(1u128, |acc, &k| acc.checked_mul((k as u128 + 1) * (n - k as u128)))
                .ok_or_else(|| overflow("identifiability gate"))?;
            mul(2, prod)? - 1
        }
        _ => mul(2, shape.dim() as u128)? - 1,
    };
    let (base, m, regime) = if shape.has_room_for_two_points() {
        (base_ratio(shape.n(), shape.k_max()), shape.k_sum() + shape.r() - 1, Regime::Asymptotic)
    } else if shape.mode() == Mode::Flag {
        match shape.ks().iter().rposition(|&k| shape.n() > 2 * k) {
            Some(i) => (base_ratio(shape.n(), shape.ks()[i]), shape.ks()[..=i].iter().sum::<usize>() + i, Regime::ReducedFlag),
            None => return Ok(no_gate(shape, reading, gate)),
        }
    } else {
        return Ok(no_gate(shape, reading, gate));
    };
    let bound = if m == 0 {
        BigRational::zero()
    } else {
        num_traits::pow::pow(base, (usize::BITS - 1 - m.leading_zeros()) as usize)
    };
    let applicable = BigRational::from_integer(BigInt::from(gate)) <= bound;
    let h_max = if applicable { bound.floor().to_integer().to_u128().ok_or_else(|| overflow("identifiability bound"))? } else { 0 };
    Ok(IdentifiabilityReport { shape: shape.clone(), reading, gate, bound: bound.to_string(), regime: Some(regime), applicable, h_max })
}

fn no_gate(shape: &FlagShape, reading: GateReading, gate: u128) -> IdentifiabilityReport {
    IdentifiabilityReport { shape: shape.clone(), reading, gate, bound: "0".into(), regime: None, applicable: false, h_max: 0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(s: &str) -> FlagShape {
        s.parse().unwrap()
    }

    #[test]
    fn product_examples() {
        let r = product_bound(&shape("G:2;8")).unwrap();
        assert_eq!((r.regime, r.h_max), (Some(Regime::ProductSmallN), 2));
        assert_eq!(r.parameters.s_prime, Some(-1));
        let r = product_bound(&shape("G:2;17")).unwrap();
        assert_eq!((r.regime, r.h_max, r.parameters.alpha), (Some(Regime::ProductLargeN), 6, Some(6)));
        assert_eq!(product_bound(&shape("G:1;5")).unwrap().h_max, 0);
        assert!(!product_bound(&shape("G:2;4")).unwrap().applicable);
    }

    #[test]
    fn flag_examples() {
        let r = flag_bound(&shape("0,1;3")).unwrap();
        assert_eq!((r.regime, r.h_max), (Some(Regime::FlagSmallN), 1));
        assert_eq!(flag_bound(&shape("1,2;5")).unwrap().h_max, 2);
        let r = flag_bound(&shape("0,2;11")).unwrap();
        assert_eq!((r.regime, r.h_max), (Some(Regime::FlagLargeN), 4));
    }

    #[test]
    fn reduced_examples() {
        let r = reduced_flag_bound(&shape("1,3;4")).unwrap();
        assert_eq!((r.parameters.l, r.parameters.exponent, r.h_max), (Some(1), Some(0), 1));
        let r = reduced_flag_bound(&shape("2,4;6")).unwrap();
        assert_eq!((r.parameters.l, r.parameters.exponent, r.h_max), (Some(1), Some(1), 2));
        assert!(!reduced_flag_bound(&shape("2,3;4")).unwrap().applicable);
        let r = reduced_flag_bound(&shape("0,2;3")).unwrap();
        assert_eq!((r.h_max, r.parameters.exponent), (0, None));
    }

    #[test]
    fn asymptotic_examples() {
        assert_eq!(asymptotic_bound(&shape("1,2;5")).unwrap().h_max, 4);
        assert_eq!(asymptotic_bound(&shape("2;8")).unwrap().h_max, 3);
        assert_eq!(asymptotic_bound(&shape("1;5")).unwrap().h_max, 1);
        assert_eq!(asymptotic_bound(&shape("0,0;5")).unwrap().h_max, 1);
    }

    #[test]
    fn identifiability_examples() {
        let r = identifiability_bound(&shape("G:4;244"), GateReading::Dimension).unwrap();
        assert_eq!((r.gate, r.applicable, r.h_max), (2399, true, 2401));
        let r = identifiability_bound(&shape("1,2;51"), GateReading::Dimension).unwrap();
        assert_eq!((r.gate, r.applicable, r.h_max, r.bound.as_str()), (297, true, 300, "2704/9"));
        assert!(!identifiability_bound(&shape("0,2;3"), GateReading::Dimension).unwrap().applicable);
        let lit = identifiability_bound(&shape("G:1,1;9"), GateReading::Literal).unwrap();
        let dim = identifiability_bound(&shape("G:1,1;9"), GateReading::Dimension).unwrap();
        assert_eq!((lit.gate, dim.gate), (2 * 16 * 16 - 1, 2 * 32 - 1));
    }

    #[test]
    fn monotone_in_alpha() {
        for n in 3..30 {
            for k in 0..=(n - 1) / 2 {
                let s = FlagShape::product(&[k], n).unwrap();
                let r = product_bound(&s).unwrap();
                if let (Some(a), Some(hs)) = (r.parameters.alpha, r.parameters.h_alpha_s) {
                    assert!(r.h_max >= (a as u128 - 1) * hs, "{}", s);
                }
            }
        }
    }
}
