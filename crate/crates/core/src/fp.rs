//! Prime fields `F_p` for small primes.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Primes above this are rejected; every computation here lives at tiny primes.
pub const MAX_PRIME: u32 = 1 << 15;

/// A validated prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 || p > MAX_PRIME || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub const fn two() -> Self {
        Prime(2)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_two(self) -> bool {
        self.0 == 2
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.0 - b) % self.0
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.0 - a % self.0) % self.0
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.0;
        (a != 0).then(|| self.pow(a, (self.0 - 2) as u64))
    }

    /// `(-1)^k` as a residue.
    #[inline]
    pub fn sign(self, k: i64) -> u32 {
        if k.rem_euclid(2) == 0 {
            1 % self.0
        } else {
            self.0 - 1
        }
    }

    /// Binomial coefficient `C(n, k)` mod p via Lucas. Zero when `k < 0`, `n < 0` or `k > n`.
    pub fn binomial(self, n: i64, k: i64) -> u32 {
        if n < 0 || k < 0 || k > n {
            return 0;
        }
        let p = self.0 as i64;
        let (mut n, mut k) = (n, k);
        let mut acc = 1u32;
        while k > 0 || n > 0 {
            let (nd, kd) = (n % p, k % p);
            if kd > nd {
                return 0;
            }
            acc = self.mul(acc, small_binomial(self, nd as u32, kd as u32));
            n /= p;
            k /= p;
        }
        acc
    }

    /// `n!` mod p.
    pub fn factorial(self, n: u64) -> u32 {
        if n >= self.0 as u64 {
            return 0;
        }
        (1..=n).fold(1 % self.0, |acc, i| self.mul(acc, i as u32))
    }
}

fn small_binomial(p: Prime, n: u32, k: u32) -> u32 {
    let mut num = 1;
    let mut den = 1;
    for i in 0..k {
        num = p.mul(num, n - i);
        den = p.mul(den, i + 1);
    }
    p.mul(num, p.inv(den).expect("k < p so k! is a unit"))
}

impl TryFrom<u32> for Prime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of `F_p` that carries its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    p: Prime,
}

impl FpScalar {
    pub fn new(p: Prime, value: i64) -> Self {
        FpScalar {
            value: p.reduce(value),
            p,
        }
    }

    pub fn zero(p: Prime) -> Self {
        FpScalar { value: 0, p }
    }

    pub fn one(p: Prime) -> Self {
        FpScalar { value: 1, p }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn prime(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<Self> {
        self.p.inv(self.value).map(|value| FpScalar { value, p: self.p })
    }

    fn check(self, other: Self) {
        assert_eq!(self.p, other.p, "scalars from different prime fields");
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        FpScalar {
            value: self.p.add(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: Self) -> Self {
        self.check(rhs);
        FpScalar {
            value: self.p.sub(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        FpScalar {
            value: self.p.mul(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> Self {
        FpScalar {
            value: self.p.neg(self.value),
            p: self.p,
        }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        for n in [0, 1, 4, 9, 15, 21] {
            assert!(Prime::new(n).is_err(), "{n}");
        }
        for n in [2, 3, 5, 7, 11, 13] {
            assert!(Prime::new(n).is_ok(), "{n}");
        }
    }

    #[test]
    fn every_nonzero_element_is_invertible() {
        for p in [2, 3, 5, 7, 11] {
            let p = Prime::new(p).unwrap();
            for a in 1..p.value() {
                assert_eq!(p.mul(a, p.inv(a).unwrap()), 1);
            }
            assert_eq!(p.inv(0), None);
        }
    }

    #[test]
    fn lucas_matches_pascal() {
        for p in [2, 3, 5] {
            let p = Prime::new(p).unwrap();
            let mut row = vec![1u64];
            for n in 0..30i64 {
                for (k, c) in row.iter().enumerate() {
                    assert_eq!(p.binomial(n, k as i64), (*c % p.value() as u64) as u32);
                }
                let mut next = vec![1u64; row.len() + 1];
                for k in 1..row.len() {
                    next[k] = row[k - 1] + row[k];
                }
                row = next;
            }
        }
        let p = Prime::new(3).unwrap();
        assert_eq!(p.binomial(-1, 0), 0);
        assert_eq!(p.binomial(3, -1), 0);
        assert_eq!(p.binomial(2, 3), 0);
    }

    #[test]
    fn char_p_kills_p_multiples() {
        let p = Prime::new(5).unwrap();
        let x = FpScalar::new(p, 3);
        let sum = (0..5).fold(FpScalar::zero(p), |acc, _| acc + x);
        assert!(sum.is_zero());
        assert_eq!(FpScalar::new(p, -1).value(), 4);
        assert_eq!(p.factorial(4), 24 % 5);
        assert_eq!(p.factorial(5), 0);
    }
}
