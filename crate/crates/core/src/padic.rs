//! Finite-precision p-adic numbers.
//!
//! A nonzero value is `p^v * (d_0 + d_1 p + ... + d_{L-1} p^{L-1})` with
//! `d_0 != 0`; `L` is the relative precision. Zero is a tagged value with no
//! digits. Arithmetic runs on the unit `sum d_i p^i` as a big integer modulo
//! `p^L` and renormalizes after every operation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::ValidatedPrime;
use crate::summation::root_of_unity;

pub const DEFAULT_PRECISION: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicNumber {
    p: ValidatedPrime,
    valuation: i64,
    digits: Vec<u32>,
}

fn pow(p: ValidatedPrime, e: usize) -> BigUint {
    BigUint::from(p.get()).pow(e as u32)
}

/// Strips factors of `p`, returning `(count, cofactor)`.
fn split_valuation(n: &BigUint, p: ValidatedPrime) -> (i64, BigUint) {
    let pb = BigUint::from(p.get());
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

fn to_digits(mut unit: BigUint, p: ValidatedPrime, len: usize) -> Vec<u32> {
    let pb = BigUint::from(p.get());
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let (q, r) = unit.div_rem(&pb);
        out.push(r.to_u32().unwrap_or(0));
        unit = q;
    }
    out
}

impl PAdicNumber {
    pub fn zero(p: ValidatedPrime) -> Self {
        Self {
            p,
            valuation: 0,
            digits: Vec::new(),
        }
    }

    /// Builds `p^v * unit` at relative precision `len`, absorbing any factors
    /// of `p` in `unit` into the valuation (and out of the precision).
    fn from_unit_mod(p: ValidatedPrime, valuation: i64, unit: BigUint, len: usize) -> Self {
        let unit = unit % pow(p, len);
        if unit.is_zero() {
            return Self::zero(p);
        }
        let (shift, unit) = split_valuation(&unit, p);
        let len = len - shift as usize;
        Self {
            p,
            valuation: valuation + shift,
            digits: to_digits(unit, p, len),
        }
    }

    /// The `precision`-digit expansion of `num / den`.
    pub fn from_rational(num: i64, den: i64, p: ValidatedPrime, precision: usize) -> Result<Self> {
        Self::from_big_rational(&BigInt::from(num), &BigInt::from(den), p, precision)
    }

    pub fn from_big_rational(
        num: &BigInt,
        den: &BigInt,
        p: ValidatedPrime,
        precision: usize,
    ) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Invalid("denominator is zero".into()));
        }
        if precision == 0 {
            return Err(Error::Invalid("precision must be at least one digit".into()));
        }
        if num.is_zero() {
            return Ok(Self::zero(p));
        }
        let (vn, n) = split_valuation(num.magnitude(), p);
        let (vd, d) = split_valuation(den.magnitude(), p);
        let modulus = pow(p, precision);
        let d_inv = (d % &modulus)
            .modinv(&modulus)
            .expect("cofactor is a unit modulo p^L");
        let mut unit = (n * d_inv) % &modulus;
        if (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus) {
            unit = &modulus - unit;
        }
        Ok(Self::from_unit_mod(p, vn - vd, unit, precision))
    }

    pub fn from_integer(n: i64, p: ValidatedPrime, precision: usize) -> Result<Self> {
        Self::from_rational(n, 1, p, precision)
    }

    /// `p^valuation * sum digits[i] p^i`; leading zero digits shift the
    /// valuation, and an all-zero digit list gives zero.
    pub fn from_digits(p: ValidatedPrime, valuation: i64, digits: &[u32]) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| u64::from(d) >= p.get()) {
            return Err(Error::Invalid(format!("digit {d} is not in [0, {p})")));
        }
        match digits.iter().position(|&d| d != 0) {
            None => Ok(Self::zero(p)),
            Some(skip) => Ok(Self {
                p,
                valuation: valuation + skip as i64,
                digits: digits[skip..].to_vec(),
            }),
        }
    }

    pub fn prime(&self) -> ValidatedPrime {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// Exponent of the leading power of `p`; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.valuation)
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    pub fn leading_digit(&self) -> Option<u32> {
        self.digits.first().copied()
    }

    /// `sum digits[i] p^i`.
    pub fn unit(&self) -> BigUint {
        let pb = BigUint::from(self.p.get());
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * &pb + BigUint::from(d))
    }

    /// The truncated expansion as an exact rational `(numerator, denominator)`.
    pub fn to_rational(&self) -> (BigInt, BigUint) {
        if self.is_zero() {
            return (BigInt::zero(), BigUint::one());
        }
        let unit = BigInt::from(self.unit());
        let scale = pow(self.p, self.valuation.unsigned_abs() as usize);
        if self.valuation >= 0 {
            (unit * BigInt::from(scale), BigUint::one())
        } else {
            (unit, scale)
        }
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::MixedPrimes(self.p.get(), other.p.get()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let low = self.valuation.min(other.valuation);
        let cap = (self.valuation + self.precision() as i64)
            .min(other.valuation + other.precision() as i64);
        let len = (cap - low) as usize;
        let shifted = |x: &Self| {
            let e = (x.valuation - low) as usize;
            if e >= len {
                BigUint::zero()
            } else {
                x.unit() * pow(self.p, e)
            }
        };
        let sum = shifted(self) + shifted(other);
        Ok(Self::from_unit_mod(self.p, low, sum, len))
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let modulus = pow(self.p, self.precision());
        Self::from_unit_mod(self.p, self.valuation, modulus - self.unit(), self.precision())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.p));
        }
        let len = self.precision().min(other.precision());
        Ok(Self::from_unit_mod(
            self.p,
            self.valuation + other.valuation,
            self.unit() * other.unit(),
            len,
        ))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let modulus = pow(self.p, self.precision());
        let unit = self
            .unit()
            .modinv(&modulus)
            .expect("leading digit is nonzero, so the unit is invertible");
        Ok(Self::from_unit_mod(self.p, -self.valuation, unit, self.precision()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn norm(&self) -> PAdicNorm {
        PAdicNorm {
            p: self.p,
            exponent: self.valuation().map(|v| -v),
        }
    }

    /// `{a} = p^v (d_0 + ... + d_{-v-1} p^{-v-1})` for `v < 0`, else 0.
    pub fn frac_part(&self) -> FractionalPart {
        match self.valuation() {
            Some(v) if v < 0 => {
                let depth = v.unsigned_abs() as usize;
                let pb = BigUint::from(self.p.get());
                let numerator = self.digits[..depth.min(self.precision())]
                    .iter()
                    .rev()
                    .fold(BigUint::zero(), |acc, &d| acc * &pb + BigUint::from(d));
                FractionalPart {
                    numerator,
                    denominator: pow(self.p, depth),
                }
            }
            _ => FractionalPart::zero(),
        }
    }

    /// The additive character `exp(2 pi i {a})`.
    pub fn chi(&self) -> Complex64 {
        self.frac_part().phase()
    }
}

/// `p^exponent`, or 0 when `exponent` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PAdicNorm {
    p: ValidatedPrime,
    exponent: Option<i64>,
}

impl PAdicNorm {
    pub fn exponent(&self) -> Option<i64> {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.exponent.is_none()
    }

    pub fn to_f64(&self) -> f64 {
        match self.exponent {
            None => 0.0,
            Some(e) => (self.p.get() as f64).powi(e as i32),
        }
    }

    /// `|x|_p <= 1`.
    pub fn at_most_one(&self) -> bool {
        self.exponent.is_none_or(|e| e <= 0)
    }
}

impl PartialOrd for PAdicNorm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.p != other.p {
            return None;
        }
        Some(match (self.exponent, other.exponent) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => a.cmp(&b),
        })
    }
}

impl fmt::Display for PAdicNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            None => f.write_str("0"),
            Some(e) if e >= 0 => write!(f, "{}", pow(self.p, e as usize)),
            Some(e) => write!(f, "1/{}", pow(self.p, e.unsigned_abs() as usize)),
        }
    }
}

/// An exact rational in `[0, 1)` whose denominator is a power of `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalPart {
    pub numerator: BigUint,
    pub denominator: BigUint,
}

impl FractionalPart {
    pub fn zero() -> Self {
        Self {
            numerator: BigUint::zero(),
            denominator: BigUint::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        ratio_f64(&self.numerator, &self.denominator)
    }

    /// `exp(2 pi i numerator / denominator)`.
    pub fn phase(&self) -> Complex64 {
        match (self.numerator.to_u64(), self.denominator.to_u64()) {
            (Some(n), Some(d)) => root_of_unity(n, d),
            _ => Complex64::from_polar(1.0, std::f64::consts::TAU * self.to_f64()),
        }
    }
}

fn ratio_f64(n: &BigUint, d: &BigUint) -> f64 {
    let shift = d.bits().saturating_sub(60);
    let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

impl fmt::Display for FractionalPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            f.write_str("0")
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

/// `1` when `t <= 1`, else `0`.
pub fn omega(t: f64) -> Result<u8> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Invalid(format!("omega is defined on t >= 0, got {t}")));
    }
    Ok(u8::from(t <= 1.0))
}

/// `omega(|x|_p)`, decided from the exponent without rounding.
pub fn omega_of_norm(n: &PAdicNorm) -> u8 {
    u8::from(n.at_most_one())
}

impl fmt::Display for PAdicNumber {
    /// `p^v * (d0,d1,...)`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        write!(f, "{}^{} * (", self.p, self.valuation)?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

/// Parses `num/den`, a plain integer, or `p^v * (d0,d1,...)` (the base may be
/// the literal `p` or the prime itself).
pub fn parse_padic(text: &str, p: ValidatedPrime, precision: usize) -> Result<PAdicNumber> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot read p-adic number from {text:?}"));
    if let Some((head, tail)) = compact.split_once('*') {
        let (base, exp) = head.split_once('^').ok_or_else(bad)?;
        if base != "p" && base.parse::<u64>().ok() != Some(p.get()) {
            return Err(Error::Parse(format!("base {base:?} does not match prime {p}")));
        }
        let valuation: i64 = exp.parse().map_err(|_| bad())?;
        let inner = tail
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let digits = inner
            .split(',')
            .map(|d| d.parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let mut digits = digits;
        digits.resize(digits.len().max(precision), 0);
        return PAdicNumber::from_digits(p, valuation, &digits);
    }
    let (num, den) = match compact.split_once('/') {
        Some((n, d)) => (n, d),
        None => (compact.as_str(), "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    PAdicNumber::from_big_rational(&num, &den, p, precision)
}
