//! Prime-field arithmetic.
//!
//! Residues are plain `u32` values in `[0, p)`; the [`PrimeField`] value
//! carries the modulus and performs every operation. All arithmetic is exact.

use rand::Rng;

use crate::error::{Error, Result};

/// Coefficient type: a residue in `[0, p)`.
pub type Scalar = u32;

/// Default characteristic.
pub const DEFAULT_CHAR: u32 = 32003;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_CHAR }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// `a - b*c`
    #[inline]
    pub fn sub_mul(&self, a: Scalar, b: Scalar, c: Scalar) -> Scalar {
        self.sub(a, self.mul(b, c))
    }

    pub fn inv(&self, a: Scalar) -> Option<Scalar> {
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i64) as u32)
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Option<Scalar> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn from_u64(&self, v: u64) -> Scalar {
        (v % self.p as u64) as u32
    }

    /// Representative in `(-p/2, p/2]`.
    pub fn to_symmetric(&self, a: Scalar) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        rng.gen_range(0..self.p)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        rng.gen_range(1..self.p)
    }
}
