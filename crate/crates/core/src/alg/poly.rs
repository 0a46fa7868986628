use alloc::vec;
use alloc::vec::Vec;

use super::Ring;

/// A univariate polynomial in `t`, coefficients in ascending degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
}

/// Polynomials in one variable `t` over a base ring.
#[derive(Debug, Clone)]
pub struct PolyRing<R> {
    base: R,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R) -> Self {
        PolyRing { base }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    /// Builds a polynomial from coefficients, trimming trailing zeros.
    pub fn from_coeffs(&self, mut coeffs: Vec<R::Elem>) -> Poly<R::Elem> {
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(&self, c: R::Elem) -> Poly<R::Elem> {
        self.from_coeffs(vec![c])
    }

    /// The variable `t`.
    pub fn t(&self) -> Poly<R::Elem> {
        self.from_coeffs(vec![self.base.zero(), self.base.one()])
    }

    /// Coefficient of `t^i`.
    pub fn coeff(&self, p: &Poly<R::Elem>, i: usize) -> R::Elem {
        p.coeffs.get(i).cloned().unwrap_or_else(|| self.base.zero())
    }

    /// Largest `v` with `t^v | p`; `None` for zero.
    pub fn valuation(&self, p: &Poly<R::Elem>) -> Option<usize> {
        p.coeffs.iter().position(|c| !self.base.is_zero(c))
    }

    /// `p / t^k`, assuming `t^k` divides `p`.
    pub fn shift_down(&self, p: &Poly<R::Elem>, k: usize) -> Poly<R::Elem> {
        debug_assert!(p.coeffs.iter().take(k).all(|c| self.base.is_zero(c)));
        Poly { coeffs: p.coeffs.iter().skip(k).cloned().collect() }
    }

    pub fn scale(&self, p: &Poly<R::Elem>, c: &R::Elem) -> Poly<R::Elem> {
        self.from_coeffs(p.coeffs.iter().map(|x| self.base.mul(x, c)).collect())
    }

    pub fn eval(&self, p: &Poly<R::Elem>, t: &R::Elem) -> R::Elem {
        let mut acc = self.base.zero();
        for c in p.coeffs.iter().rev() {
            acc = self.base.add(&self.base.mul(&acc, t), c);
        }
        acc
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Poly { coeffs: Vec::new() }
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    fn of_i64(&self, value: i64) -> Self::Elem {
        self.constant(self.base.of_i64(value))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let len = a.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..len).map(|i| self.base.add(&self.coeff(a, i), &self.coeff(b, i))).collect();
        self.from_coeffs(coeffs)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let len = a.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..len).map(|i| self.base.sub(&self.coeff(a, i), &self.coeff(b, i))).collect();
        self.from_coeffs(coeffs)
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut coeffs = vec![self.base.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                self.base.add_mul_assign(&mut coeffs[i + j], x, y);
            }
        }
        self.from_coeffs(coeffs)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Poly { coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect() }
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.coeffs.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alg::PrimeField;

    #[test]
    fn arithmetic_and_valuation() {
        let r = PolyRing::new(PrimeField::new(101).unwrap());
        let t = r.t();
        let t2 = r.mul(&t, &t);
        let p = r.add(&t2, &r.mul(&t2, &t)); // t^2 + t^3
        assert_eq!(r.valuation(&p), Some(2));
        assert_eq!(p.degree(), Some(3));
        let q = r.shift_down(&p, 2);
        assert_eq!(q.coeffs(), &[1, 1]);
        assert_eq!(r.eval(&p, &2), 12);
        assert!(r.is_zero(&r.sub(&p, &p)));
        assert_eq!(r.valuation(&r.zero()), None);
    }
}
