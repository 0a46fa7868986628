use alloc::format;

use rand::{Rng, RngCore};

use super::{Field, Ring, Sample};
use crate::error::{Error, Result};

/// The prime field `F_p` for a prime `p < 2^62`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Accepts primes below `2^62`, so that sums of two reduced values never overflow.
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 62 {
            return Err(Error::Precondition(format!("modulus {} is not below 2^62", p)));
        }
        if !is_prime_u64(p) {
            return Err(Error::Precondition(format!("modulus {} is not prime", p)));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Canonical representative of a signed integer.
    pub fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn of_i64(&self, value: i64) -> u64 {
        self.reduce_i128(value as i128)
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add_mul_assign(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = ((*acc as u128 + *a as u128 * *b as u128) % self.p as u128) as u64;
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
}

impl Sample for PrimeField {
    fn random(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.p)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
