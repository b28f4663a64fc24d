//! Integer, modular and residue-symbol arithmetic.
//!
//! Everything here is exact. Primality is decided by trial division, which
//! is deterministic for every `n <= MAX_SUPPORTED` (divisors up to 10^6).

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest integer accepted by [`is_prime`].
pub const MAX_SUPPORTED: u64 = 1_000_000_000_000;

pub fn is_prime(n: u64) -> Result<bool> {
    if !(2..=MAX_SUPPORTED).contains(&n) {
        return Err(Error::OutOfRange(n));
    }
    if n < 4 {
        return Ok(true);
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return Ok(false);
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return Ok(false);
        }
        d += 6;
    }
    Ok(true)
}

/// An odd prime, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ValidatedPrime(u64);

impl ValidatedPrime {
    pub fn new(n: u64) -> Result<Self> {
        if n == 2 {
            return Err(Error::UnsupportedPrime);
        }
        if n < 2 || !is_prime(n)? {
            return Err(Error::NotOddPrime(n));
        }
        Ok(Self(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// `p mod 4`, always 1 or 3.
    #[inline]
    pub fn mod4(self) -> u64 {
        self.0 % 4
    }

    /// Odd primes up to and including `max`, in increasing order.
    pub fn up_to(max: u64) -> Vec<Self> {
        (3..=max)
            .step_by(2)
            .filter(|&n| is_prime(n).unwrap_or(false))
            .map(Self)
            .collect()
    }
}

impl fmt::Display for ValidatedPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Value of a Legendre symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LegendreValue {
    MinusOne,
    Zero,
    PlusOne,
}

impl LegendreValue {
    pub fn as_i8(self) -> i8 {
        match self {
            LegendreValue::MinusOne => -1,
            LegendreValue::Zero => 0,
            LegendreValue::PlusOne => 1,
        }
    }

    pub fn from_sign(sign: i64) -> Self {
        match sign.signum() {
            -1 => LegendreValue::MinusOne,
            0 => LegendreValue::Zero,
            _ => LegendreValue::PlusOne,
        }
    }
}

impl std::ops::Mul for LegendreValue {
    type Output = LegendreValue;

    fn mul(self, rhs: Self) -> Self {
        Self::from_sign(i64::from(self.as_i8()) * i64::from(rhs.as_i8()))
    }
}

impl Serialize for LegendreValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

/// Non-negative remainder of `a` modulo `m`.
#[inline]
pub fn rem_euclid(a: i64, m: u64) -> u64 {
    (i128::from(a).rem_euclid(i128::from(m))) as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
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

/// Legendre symbol `(q/p)` by Euler's criterion, extended to 0 when `p | q`.
pub fn legendre_symbol(q: i64, p: ValidatedPrime) -> LegendreValue {
    let p = p.get();
    let q = rem_euclid(q, p);
    if q == 0 {
        return LegendreValue::Zero;
    }
    match pow_mod(q, (p - 1) / 2, p) {
        1 => LegendreValue::PlusOne,
        r if r == p - 1 => LegendreValue::MinusOne,
        r => unreachable!("Euler criterion produced {r} mod prime {p}"),
    }
}

/// Extended Euclid: `(g, r, s)` with `g = gcd(a, b) >= 0` and `r*a + s*b = g`.
pub fn bezout(a: i64, b: i64) -> Result<(i64, i64, i64)> {
    if a == 0 && b == 0 {
        return Err(Error::Invalid("bezout(0, 0) is undefined".into()));
    }
    let (mut old_r, mut r) = (i128::from(a), i128::from(b));
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let quot = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
        (old_t, t) = (t, old_t - quot * t);
    }
    if old_r < 0 {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    let narrow = |v: i128| i64::try_from(v).map_err(|_| Error::Invalid("bezout overflow".into()));
    Ok((narrow(old_r)?, narrow(old_s)?, narrow(old_t)?))
}

/// An element of `Z/mZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ResidueClass {
    representative: u64,
    modulus: u64,
}

impl ResidueClass {
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Invalid("modulus must be positive".into()));
        }
        Ok(Self {
            representative: rem_euclid(value, modulus),
            modulus,
        })
    }

    pub fn representative(self) -> u64 {
        self.representative
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_square(self) -> bool {
        (0..self.modulus).any(|z| mul_mod(z, z, self.modulus) == self.representative)
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.representative, self.modulus)
    }
}

fn check_coprime(a: u64, b: u64) -> Result<()> {
    if a == 0 || b == 0 || a.gcd(&b) != 1 {
        return Err(Error::NotCoprime {
            a: a as i64,
            b: b as i64,
        });
    }
    Ok(())
}

/// Image of `x mod ab` under `Z_ab -> Z_a x Z_b`.
pub fn crt_split(x: ResidueClass, a: u64, b: u64) -> Result<(ResidueClass, ResidueClass)> {
    check_coprime(a, b)?;
    if u128::from(a) * u128::from(b) != u128::from(x.modulus) {
        return Err(Error::Invalid(format!(
            "modulus {} is not {a}*{b}",
            x.modulus
        )));
    }
    Ok((
        ResidueClass {
            representative: x.representative % a,
            modulus: a,
        },
        ResidueClass {
            representative: x.representative % b,
            modulus: b,
        },
    ))
}

/// Inverse image `s*b*x + r*a*y mod ab`, where `r*a + s*b = 1`.
pub fn crt_lift(x: ResidueClass, y: ResidueClass) -> Result<ResidueClass> {
    let (a, b) = (x.modulus, y.modulus);
    check_coprime(a, b)?;
    let (_, r, s) = bezout(a as i64, b as i64)?;
    let ab = i128::from(a) * i128::from(b);
    let lifted = (i128::from(s) * i128::from(b) * i128::from(x.representative)
        + i128::from(r) * i128::from(a) * i128::from(y.representative))
    .rem_euclid(ab);
    Ok(ResidueClass {
        representative: lifted as u64,
        modulus: ab as u64,
    })
}
