//! Exact scalars and dense linear algebra.
//!
//! Scalars are handled through ring objects ([`Ring`], [`Field`]) rather than
//! operator overloading, so that runtime parameters (the modulus of a prime
//! field, the number of jet variables) live in the ring and not in every
//! element. Only fields get elimination-based routines; polynomial and jet
//! rings are restricted to division-free code paths by construction.

mod flat;
mod fp;
mod jet;
mod matrix;
mod mpoly;
mod poly;
mod rational;
mod subspace;

use core::fmt::Debug;

use rand::RngCore;

pub use self::flat::flat_limit;
pub use self::fp::{is_prime_u64, PrimeField};
pub use self::jet::{jet_eval, Jet, JetRing};
pub use self::matrix::{det, kernel, leading_minors, rank, rref, LeadingMinors, Matrix};
pub use self::mpoly::{MPoly, MPolyRing, Monomial};
pub use self::poly::{Poly, PolyRing};
pub use self::rational::{bareiss_rank, Rationals};
pub use self::subspace::{intersect_dim, SubspaceBasis};

/// A commutative ring with unit.
pub trait Ring {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn of_i64(&self, value: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// `acc += a * b`.
    fn add_mul_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, &self.mul(a, b));
    }
}

/// A field: every non-zero element is invertible.
pub trait Field: Ring {
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Rank of a matrix over this field. Defaults to Gaussian elimination.
    fn rank_of(&self, m: &Matrix<Self::Elem>) -> usize
    where
        Self: Sized,
    {
        matrix::echelon_rank(self, m)
    }
}

/// Fields from which uniformly random elements can be drawn.
pub trait Sample: Ring {
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;

    fn random_nonzero(&self, rng: &mut dyn RngCore) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }
}
