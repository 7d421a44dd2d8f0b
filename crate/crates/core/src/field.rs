//! Arithmetic in the prime field GF(p).
//!
//! Elements are plain `u32` values held in canonical form `[0, p)`; the
//! [`FieldContext`] carries the modulus and performs every operation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default experiment prime.
pub const DEFAULT_PRIME: u32 = 10007;

/// A prime modulus `p` with `2 < p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FieldContext {
    p: u32,
}

impl TryFrom<u32> for FieldContext {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        FieldContext::new(p)
    }
}

impl From<FieldContext> for u32 {
    fn from(ctx: FieldContext) -> u32 {
        ctx.p
    }
}

impl FieldContext {
    pub fn new(p: u32) -> Result<Self> {
        if p <= 2 || p >= 1 << 31 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(FieldContext { p })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Canonical representative of an arbitrary integer.
    #[inline]
    pub fn from_i64(&self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u32 {
        (a % self.p as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.p as u64 {
            (s - self.p as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: u32) -> Result<u32> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.from_i64(t0))
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u32) -> u64 {
        assert!(!a.is_multiple_of(self.p), "order of zero is undefined");
        let mut order = (self.p - 1) as u64;
        for q in prime_factors((self.p - 1) as u64) {
            while order.is_multiple_of(q) && self.pow(a, order / q) == 1 {
                order /= q;
            }
        }
        order
    }

    /// The first element (scanning generators from 2 upward) whose multiplicative
    /// order is exactly `level`.
    pub fn primitive_root_of_unity(&self, level: u32) -> Result<u32> {
        if level < 2 {
            return Err(Error::InvalidArgument(format!(
                "root of unity level must be at least 2, got {level}"
            )));
        }
        let group = (self.p - 1) as u64;
        if !group.is_multiple_of(level as u64) {
            return Err(Error::NoRootOfUnity { level, p: self.p });
        }
        let cofactor = group / level as u64;
        let level_primes = prime_factors(level as u64);
        for x in 2..self.p {
            let zeta = self.pow(x, cofactor);
            if level_primes
                .iter()
                .all(|&q| self.pow(zeta, level as u64 / q) != 1)
            {
                return Ok(zeta);
            }
        }
        unreachable!("the multiplicative group of GF(p) is cyclic")
    }
}

/// Deterministic trial division; adequate for `n < 2^32`.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let n = n as u64;
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest prime strictly greater than `floor` such that every level divides `p - 1`.
pub fn smallest_prime_with_levels(floor: u32, levels: &[u32]) -> u32 {
    let modulus = levels
        .iter()
        .fold(1u64, |acc, &l| lcm(acc, l.max(1) as u64));
    let mut p = floor as u64 + 1;
    loop {
        if (p - 1).is_multiple_of(modulus) && p > 2 && is_prime(p as u32) {
            return p as u32;
        }
        p += 1;
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
