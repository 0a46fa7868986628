use alloc::vec;
use alloc::vec::Vec;

use super::Ring;

/// A first-order jet `value + Σ grad_i ε_i` with `ε_i ε_j = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jet<E> {
    pub value: E,
    pub grad: Vec<E>,
}

/// First-order jets in a fixed number of nilpotent generators over a base ring.
///
/// There is no division: jets only implement [`Ring`], so any expression fed
/// to [`jet_eval`] must be polynomial.
#[derive(Debug, Clone)]
pub struct JetRing<R> {
    base: R,
    vars: usize,
}

impl<R: Ring> JetRing<R> {
    pub fn new(base: R, vars: usize) -> Self {
        JetRing { base, vars }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn constant(&self, value: R::Elem) -> Jet<R::Elem> {
        Jet { value, grad: vec![self.base.zero(); self.vars] }
    }

    /// The variable `x_index` evaluated at `value`.
    pub fn variable(&self, value: R::Elem, index: usize) -> Jet<R::Elem> {
        let mut jet = self.constant(value);
        jet.grad[index] = self.base.one();
        jet
    }
}

impl<R: Ring> Ring for JetRing<R> {
    type Elem = Jet<R::Elem>;

    fn zero(&self) -> Self::Elem {
        self.constant(self.base.zero())
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    fn of_i64(&self, value: i64) -> Self::Elem {
        self.constant(self.base.of_i64(value))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Jet {
            value: self.base.add(&a.value, &b.value),
            grad: a.grad.iter().zip(&b.grad).map(|(x, y)| self.base.add(x, y)).collect(),
        }
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Jet {
            value: self.base.sub(&a.value, &b.value),
            grad: a.grad.iter().zip(&b.grad).map(|(x, y)| self.base.sub(x, y)).collect(),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let a_const = a.grad.iter().all(|g| self.base.is_zero(g));
        let b_const = b.grad.iter().all(|g| self.base.is_zero(g));
        let grad = match (a_const, b_const) {
            (true, true) => vec![self.base.zero(); self.vars],
            (true, false) => b.grad.iter().map(|g| self.base.mul(&a.value, g)).collect(),
            (false, true) => a.grad.iter().map(|g| self.base.mul(&b.value, g)).collect(),
            (false, false) => a
                .grad
                .iter()
                .zip(&b.grad)
                .map(|(da, db)| {
                    let mut acc = self.base.mul(&a.value, db);
                    self.base.add_mul_assign(&mut acc, &b.value, da);
                    acc
                })
                .collect(),
        };
        Jet { value: self.base.mul(&a.value, &b.value), grad }
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Jet { value: self.base.neg(&a.value), grad: a.grad.iter().map(|g| self.base.neg(g)).collect() }
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.base.is_zero(&a.value) && a.grad.iter().all(|g| self.base.is_zero(g))
    }
}

/// Evaluates `f` at `point` with a single nilpotent generator attached to
/// coordinate `var`, returning `(f(point), ∂f/∂x_var (point))`.
pub fn jet_eval<R, F>(base: &R, f: F, point: &[R::Elem], var: usize) -> (R::Elem, R::Elem)
where
    R: Ring + Clone,
    F: Fn(&JetRing<R>, &[Jet<R::Elem>]) -> Jet<R::Elem>,
{
    let ring = JetRing::new(base.clone(), 1);
    let args: Vec<_> = point
        .iter()
        .enumerate()
        .map(|(i, x)| if i == var { ring.variable(x.clone(), 0) } else { ring.constant(x.clone()) })
        .collect();
    let out = f(&ring, &args);
    (out.value, out.grad.into_iter().next().unwrap_or_else(|| base.zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alg::{det, Matrix, PrimeField};

    #[test]
    fn square_at_three() {
        let f = PrimeField::new(1_000_003).unwrap();
        let (v, d) = jet_eval(&f, |r, x| r.mul(&x[0], &x[0]), &[3], 0);
        assert_eq!((v, d), (9, 6));
    }

    #[test]
    fn determinant_derivative() {
        let f = PrimeField::new(1_000_003).unwrap();
        let (v, d) = jet_eval(
            &f,
            |r, x| {
                let m = Matrix::from_rows(2, vec![vec![x[0].clone(), r.one()], vec![r.of_i64(2), x[0].clone()]]);
                det(r, &m)
            },
            &[5],
            0,
        );
        assert_eq!((v, d), (23, 10));
    }
}
