use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Ring;

/// Exponent vector of a monomial.
pub type Monomial = Vec<u16>;

/// Sparse multivariate polynomial with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MPoly {
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, monomial: &[u16]) -> BigInt {
        self.terms.get(monomial).cloned().unwrap_or_default()
    }

    fn insert(&mut self, monomial: Monomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(monomial) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

/// `Z[x_0, ..., x_{vars-1}]`, used to expand chart coordinates symbolically.
#[derive(Debug, Clone, Copy)]
pub struct MPolyRing {
    vars: usize,
}

impl MPolyRing {
    pub fn new(vars: usize) -> Self {
        MPolyRing { vars }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn variable(&self, index: usize) -> MPoly {
        let mut m = vec![0u16; self.vars];
        m[index] = 1;
        let mut p = MPoly::default();
        p.insert(m, BigInt::one());
        p
    }
}

impl Ring for MPolyRing {
    type Elem = MPoly;

    fn zero(&self) -> MPoly {
        MPoly::default()
    }

    fn one(&self) -> MPoly {
        self.of_i64(1)
    }

    fn of_i64(&self, value: i64) -> MPoly {
        let mut p = MPoly::default();
        p.insert(vec![0; self.vars], BigInt::from(value));
        p
    }

    fn add(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let mut out = a.clone();
        for (m, c) in &b.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    fn sub(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let mut out = a.clone();
        for (m, c) in &b.terms {
            out.insert(m.clone(), -c);
        }
        out
    }

    fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let mut out = MPoly::default();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                out.insert(m, ca * cb);
            }
        }
        out
    }

    fn neg(&self, a: &MPoly) -> MPoly {
        MPoly { terms: a.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    fn is_zero(&self, a: &MPoly) -> bool {
        a.terms.is_empty()
    }
}
