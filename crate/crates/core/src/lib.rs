//! Exact-arithmetic engine for secant dimensions, osculating spaces and
//! non-defectivity bounds of flag varieties `F(k1,...,kr;n)` and products of
//! Grassmannians in their Plücker-Segre embeddings.
//!
//! The crate is `no_std` (it needs `alloc`). Randomness is always driven by an
//! explicit seed, so every computation is reproducible given `(prime, seed)`.
//!
//! All subspaces are handled as affine cones: a [`SubspaceBasis`] of rank `d`
//! represents a projective linear space of dimension `d - 1`. Dimensions that
//! are reported as projective (secant dimensions, spans) carry that `- 1`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod alg;
pub mod bounds;
mod error;
pub mod flag;
pub mod index;
pub mod oscproj;
pub mod secant;
pub mod shape;

pub use crate::alg::{Field, Matrix, PrimeField, Rationals, Ring, SubspaceBasis};
pub use crate::error::{Error, Result};
pub use crate::shape::{FlagShape, Mode};

/// Default modulus: the Mersenne prime `2^61 - 1`.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

/// Second modulus used to confirm results computed with [`DEFAULT_PRIME`].
pub const CONFIRM_PRIME: u64 = (1 << 62) - 57;

/// Seeded generator used everywhere randomness is needed.
pub type SeededRng = rand_chacha::ChaCha8Rng;

/// Builds the generator for `seed`.
pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}
