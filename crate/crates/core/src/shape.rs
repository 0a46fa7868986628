//! Shapes `(k1 <= ... <= kr; n)` and their textual form `[G:]k1,...,kr;n`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::index::binomial;

/// Which variety a shape denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// The flag variety `F(k1,...,kr;n)` of nested subspaces.
    Flag,
    /// The product `G(k1,n) x ... x G(kr,n)` in its Segre embedding.
    ProductOfGrassmannians,
}

/// A non-decreasing tuple `k1 <= ... <= kr < n` together with a [`Mode`].
///
/// The `k_i` are projective dimensions: the i-th factor parametrizes
/// `(k_i + 1)`-dimensional linear subspaces of an `(n + 1)`-dimensional space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlagShape {
    ks: Vec<usize>,
    n: usize,
    mode: Mode,
}

impl FlagShape {
    pub fn new(ks: Vec<usize>, n: usize, mode: Mode) -> Result<Self> {
        if ks.is_empty() {
            return Err(Error::Shape("at least one k is required".into()));
        }
        if ks.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Shape(format!("ks must be non-decreasing, got {:?}", ks)));
        }
        if *ks.last().unwrap() >= n {
            return Err(Error::Shape(format!("need k_r < n, got k_r = {} and n = {}", ks.last().unwrap(), n)));
        }
        Ok(FlagShape { ks, n, mode })
    }

    pub fn flag(ks: &[usize], n: usize) -> Result<Self> {
        Self::new(ks.to_vec(), n, Mode::Flag)
    }

    pub fn product(ks: &[usize], n: usize) -> Result<Self> {
        Self::new(ks.to_vec(), n, Mode::ProductOfGrassmannians)
    }

    pub fn ks(&self) -> &[usize] {
        &self.ks
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_flag(&self) -> bool {
        self.mode == Mode::Flag
    }

    /// Number of factors `r`.
    pub fn r(&self) -> usize {
        self.ks.len()
    }

    pub fn k_max(&self) -> usize {
        *self.ks.last().unwrap()
    }

    pub fn k_sum(&self) -> usize {
        self.ks.iter().sum()
    }

    /// `floor((n+1)/(k_r+1))`: how many coordinate points with independent supports fit.
    pub fn alpha(&self) -> usize {
        (self.n + 1) / (self.k_max() + 1)
    }

    /// `r + sum k_i`, the diameter of the index set once `n >= 2 k_r + 1`.
    pub fn diameter(&self) -> usize {
        self.r() + self.k_sum()
    }

    /// `r - 2 + sum k_i`, the largest osculating order usable as a projection center.
    pub fn max_projection_order(&self) -> Option<usize> {
        (self.r() + self.k_sum()).checked_sub(2)
    }

    /// `n >= 2 k_r + 1`.
    pub fn has_room_for_two_points(&self) -> bool {
        self.n > 2 * self.k_max()
    }

    /// `n >= k_r^2 + 3 k_r + 1`.
    pub fn is_large_n(&self) -> bool {
        let k = self.k_max();
        self.n > k * k + 3 * k
    }

    /// Dimension of the variety.
    pub fn dim(&self) -> usize {
        let n = self.n;
        match self.mode {
            Mode::ProductOfGrassmannians => self.ks.iter().map(|&k| (k + 1) * (n - k)).sum(),
            Mode::Flag => {
                let k1 = self.ks[0];
                let mut d = (k1 + 1) * (n - k1);
                for w in self.ks.windows(2) {
                    d += (n - w[1]) * (w[1] - w[0]);
                }
                d
            }
        }
    }

    /// Number of Segre-Plücker coordinates, `prod C(n+1, k_i+1)`.
    pub fn ambient_size(&self) -> Option<u128> {
        self.ks
            .iter()
            .try_fold(1u128, |acc, &k| acc.checked_mul(binomial(self.n + 1, k + 1)?))
    }

    /// [`Self::ambient_size`] as a `usize`, for shapes whose coordinates get materialized.
    pub fn ambient_len(&self) -> Result<usize> {
        self.ambient_size()
            .and_then(|a| usize::try_from(a).ok())
            .ok_or_else(|| Error::Overflow(format!("ambient of {} does not fit in memory", self)))
    }

    /// Same tuple viewed in the other mode.
    pub fn with_mode(&self, mode: Mode) -> Self {
        FlagShape { ks: self.ks.clone(), n: self.n, mode }
    }
}

impl fmt::Display for FlagShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mode == Mode::ProductOfGrassmannians {
            f.write_str("G:")?;
        }
        for (i, k) in self.ks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", k)?;
        }
        write!(f, ";{}", self.n)
    }
}

fn parse_error(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

fn parse_number(text: &str, start: usize) -> Result<usize> {
    if text.is_empty() {
        return Err(parse_error(start, "expected a number"));
    }
    if let Some(i) = text.find(|c: char| !c.is_ascii_digit()) {
        return Err(parse_error(start + i, "expected a digit"));
    }
    text.parse().map_err(|_| parse_error(start, "number out of range"))
}

impl FromStr for FlagShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mode, body, offset) = match s.strip_prefix("G:") {
            Some(rest) => (Mode::ProductOfGrassmannians, rest, 2),
            None => (Mode::Flag, s, 0),
        };
        let semi = body.find(';').ok_or_else(|| parse_error(offset + body.len(), "missing ';n'"))?;
        let n = parse_number(&body[semi + 1..], offset + semi + 1)?;
        let mut ks = Vec::new();
        let mut pos = offset;
        for part in body[..semi].split(',') {
            let k = parse_number(part, pos)?;
            if let Some(&prev) = ks.last() {
                if k < prev {
                    return Err(parse_error(pos, format!("ks must be non-decreasing ({} after {})", k, prev)));
                }
            }
            ks.push(k);
            pos += part.len() + 1;
        }
        if *ks.last().unwrap() >= n {
            return Err(parse_error(offset + semi + 1, "need k_r < n"));
        }
        FlagShape::new(ks, n, mode)
    }
}

impl Serialize for FlagShape {
    fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FlagShape {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
