//! Exact integer helpers and the group Q/Z.
//!
//! All integers are `u64`/`i64`. Every operation whose result could leave that
//! range goes through a checked path and reports [`Error::Overflow`] instead of
//! wrapping.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// A rational prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(domain(format!("{p} is not prime")))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// `p^e`, failing on overflow.
    pub fn pow(self, e: u32) -> Result<u64> {
        checked_pow(self.0, e)
    }

    /// Largest `e` with `p^e | m`.
    pub fn valuation(self, m: u64) -> Result<u32> {
        if m == 0 {
            return Err(domain("valuation of 0 is undefined"));
        }
        let mut m = m;
        let mut e = 0;
        while m.is_multiple_of(self.0) {
            m /= self.0;
            e += 1;
        }
        Ok(e)
    }

    /// Splits `m = p^a * rest` with `rest` coprime to p.
    pub fn split(self, m: u64) -> Result<(u32, u64)> {
        let a = self.valuation(m)?;
        Ok((a, m / self.0.pow(a)))
    }

    /// Whether `m` is a (possibly trivial) power of p.
    pub fn is_power(self, m: u64) -> bool {
        matches!(self.split(m), Ok((_, 1)))
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
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

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
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

/// p-adic valuation of `m`. Both `m = 0` and non-prime `p` are domain errors.
pub fn v_p(m: u64, p: u64) -> Result<u32> {
    Prime::new(p)?.valuation(m)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b))
        .checked_mul(b)
        .ok_or_else(|| Error::Overflow(format!("lcm({a}, {b})")))
}

/// gcd of a nonempty list of positive integers.
pub fn gcd_list(ds: &[u64]) -> Result<u64> {
    if ds.is_empty() {
        return Err(domain("gcd of an empty list"));
    }
    if ds.contains(&0) {
        return Err(domain("gcd_list entries must be positive"));
    }
    Ok(ds.iter().copied().fold(0, gcd))
}

pub fn checked_pow(base: u64, e: u32) -> Result<u64> {
    base.checked_pow(e)
        .ok_or_else(|| Error::Overflow(format!("{base}^{e}")))
}

pub fn checked_mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b)
        .ok_or_else(|| Error::Overflow(format!("{a} * {b}")))
}

/// Inverse of `a` modulo `m` (`m >= 1`, `gcd(a, m) = 1`).
pub fn inverse_mod(a: u64, m: u64) -> Result<u64> {
    if m == 1 {
        return Ok(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return Err(domain(format!("{a} is not invertible modulo {m}")));
    }
    Ok(s0.rem_euclid(m as i128) as u64)
}

/// An element of Q/Z in canonical form: `0 <= num < den`, `gcd(num, den) = 1`.
///
/// Zero is `0/1`. Equality and hashing are structural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };

    /// The class of `num/den` modulo 1.
    pub fn new(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(domain("fraction with zero denominator"));
        }
        Ok(Self::reduce(num as i128, den))
    }

    fn reduce(num: i128, den: u64) -> Self {
        let r = num.rem_euclid(den as i128) as u64;
        let g = gcd(r, den);
        Fraction {
            num: r / g,
            den: den / g,
        }
    }

    #[inline]
    pub fn num(self) -> u64 {
        self.num
    }

    #[inline]
    pub fn den(self) -> u64 {
        self.den
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.den == 1
    }

    /// Order in Q/Z.
    #[inline]
    pub fn order(self) -> u64 {
        self.den
    }

    pub fn checked_add(self, other: Fraction) -> Result<Fraction> {
        let l = lcm(self.den, other.den)?;
        let a = self.num as u128 * (l / self.den) as u128;
        let b = other.num as u128 * (l / other.den) as u128;
        let s = ((a + b) % l as u128) as i128;
        Ok(Self::reduce(s, l))
    }

    /// `t * self` in Q/Z. Never overflows: the product is formed in 128 bits.
    pub fn scale(self, t: i64) -> Fraction {
        Self::reduce(self.num as i128 * t as i128, self.den)
    }
}

impl std::ops::Neg for Fraction {
    type Output = Fraction;

    fn neg(self) -> Fraction {
        self.scale(-1)
    }
}

/// Group law of Q/Z; panics only if the common denominator exceeds `u64`.
pub fn frac_add(a: Fraction, b: Fraction) -> Fraction {
    a.checked_add(b).expect("Q/Z addition overflowed u64")
}

pub fn frac_scale(a: Fraction, t: i64) -> Fraction {
    a.scale(t)
}

pub fn frac_order(a: Fraction) -> u64 {
    a.order()
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    /// Accepts `"a/b"` (any integer `a`, positive `b`) or a bare integer.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || domain(format!("malformed fraction {s:?}; expected \"num/den\""));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: u64 = d.trim().parse().map_err(|_| bad())?;
                Fraction::new(n, d)
            }
            None => {
                let n: i64 = s.parse().map_err(|_| bad())?;
                Fraction::new(n, 1)
            }
        }
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
