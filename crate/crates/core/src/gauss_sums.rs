//! Quadratic Gauss sums, the quarter sum over `Z_{4q}`, and the two forms of
//! quadratic reciprocity.
//!
//! `G(q/n) = sum_{k=0}^{n-1} exp(2 pi i q k^2 / n)`. For an odd prime `p` and
//! `gcd(q, p) = 1` the closed form is `sqrt(p) (q/p)` when `p = 1 mod 4` and
//! `i sqrt(p) (q/p)` when `p = 3 mod 4`.

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact_arith::{legendre_symbol, mul_mod, rem_euclid, LegendreValue, ValidatedPrime};
use crate::summation::{root_of_unity, ComplexSum};

/// Relative tolerance (in units of `sqrt(p)`) for comparing Gauss sums.
pub const GAUSS_SUM_TOLERANCE: f64 = 1e-9;

/// One of the four units `1, i, -1, -i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuarterTurn {
    One,
    I,
    MinusOne,
    MinusI,
}

impl QuarterTurn {
    pub fn to_complex(self) -> Complex64 {
        match self {
            QuarterTurn::One => Complex64::new(1.0, 0.0),
            QuarterTurn::I => Complex64::new(0.0, 1.0),
            QuarterTurn::MinusOne => Complex64::new(-1.0, 0.0),
            QuarterTurn::MinusI => Complex64::new(0.0, -1.0),
        }
    }

    /// Number of quarter turns, in `0..4`.
    pub fn index(self) -> u8 {
        match self {
            QuarterTurn::One => 0,
            QuarterTurn::I => 1,
            QuarterTurn::MinusOne => 2,
            QuarterTurn::MinusI => 3,
        }
    }

    pub fn from_index(k: u8) -> Self {
        match k % 4 {
            0 => QuarterTurn::One,
            1 => QuarterTurn::I,
            2 => QuarterTurn::MinusOne,
            _ => QuarterTurn::MinusI,
        }
    }

    pub fn times_sign(self, sign: LegendreValue) -> Self {
        match sign {
            LegendreValue::MinusOne => Self::from_index(self.index() + 2),
            _ => self,
        }
    }

    pub fn conj(self) -> Self {
        Self::from_index(4 - self.index())
    }
}

impl std::ops::Mul for QuarterTurn {
    type Output = QuarterTurn;

    fn mul(self, rhs: Self) -> Self {
        Self::from_index(self.index() + rhs.index())
    }
}

impl fmt::Display for QuarterTurn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuarterTurn::One => "+1",
            QuarterTurn::I => "+i",
            QuarterTurn::MinusOne => "-1",
            QuarterTurn::MinusI => "-i",
        })
    }
}

/// Symbolic value `phase * legendre_factor * sqrt(modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactForm {
    pub modulus: u64,
    pub phase: QuarterTurn,
    pub legendre_factor: LegendreValue,
}

impl ExactForm {
    pub fn unit(&self) -> QuarterTurn {
        self.phase.times_sign(self.legendre_factor)
    }

    pub fn to_complex(&self) -> Complex64 {
        self.unit().to_complex() * (self.modulus as f64).sqrt()
    }
}

impl fmt::Display for ExactForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = format!("sqrt({})", self.modulus);
        match self.unit() {
            QuarterTurn::One => write!(f, "+{root}"),
            QuarterTurn::MinusOne => write!(f, "-{root}"),
            QuarterTurn::I => write!(f, "+i*{root}"),
            QuarterTurn::MinusI => write!(f, "-i*{root}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussSumValue {
    pub numeric: Complex64,
    pub exact_form: Option<ExactForm>,
}

/// `sum_{k=0}^{n-1} exp(2 pi i q k^2 / n)` with exact residues and
/// compensated accumulation. Any modulus `n >= 1` is accepted.
pub fn gauss_sum_direct(n: u64, q: i64) -> Complex64 {
    assert!(n >= 1, "gauss_sum_direct needs a positive modulus");
    let q = rem_euclid(q, n);
    let mut square = 0u64; // k^2 mod n
    let mut acc = ComplexSum::new();
    for k in 0..n {
        acc.add(root_of_unity(mul_mod(q, square, n), n));
        square = (square + 2 * (k % n) + 1) % n;
    }
    acc.value()
}

fn require_coprime(p: ValidatedPrime, q: i64) -> Result<()> {
    if rem_euclid(q, p.get()) == 0 {
        return Err(Error::NotCoprime {
            a: q,
            b: p.get() as i64,
        });
    }
    Ok(())
}

/// The unit factor `G(1/p) / sqrt(p)`: 1 for `p = 1 mod 4`, `i` otherwise.
pub fn unit_phase(p: ValidatedPrime) -> QuarterTurn {
    if p.mod4() == 1 {
        QuarterTurn::One
    } else {
        QuarterTurn::I
    }
}

pub fn gauss_sum_closed(p: ValidatedPrime, q: i64) -> Result<GaussSumValue> {
    require_coprime(p, q)?;
    let form = ExactForm {
        modulus: p.get(),
        phase: unit_phase(p),
        legendre_factor: legendre_symbol(q, p),
    };
    Ok(GaussSumValue {
        numeric: form.to_complex(),
        exact_form: Some(form),
    })
}

/// The factor `(q/p)` in `G(q/p) = (q/p) G(1/p)`.
pub fn reduce_to_unit(p: ValidatedPrime, q: i64) -> Result<LegendreValue> {
    require_coprime(p, q)?;
    Ok(legendre_symbol(q, p))
}

/// `sum_{k=1}^{4q} exp(-2 pi i p k^2 / (4q))`, summed directly.
pub fn quarter_sum(p: i64, q: u64) -> Result<Complex64> {
    if q == 0 {
        return Err(Error::Invalid("quarter_sum needs q >= 1".into()));
    }
    let n = 4 * q;
    let minus_p = rem_euclid(-p, n);
    let acc: ComplexSum = (1..=n)
        .map(|k| root_of_unity(mul_mod(minus_p, k * k % n, n), n))
        .collect();
    Ok(acc.value())
}

/// Bezout pair `(r, s)` with `4r + qs = 1`, using `s = 1` for `q = 1 mod 4`
/// and `s = -1` for `q = 3 mod 4`.
pub fn quarter_bezout(q: u64) -> Result<(i64, i64)> {
    if q.is_even() {
        return Err(Error::Invalid(format!("q = {q} must be odd")));
    }
    let q = q as i64;
    let s = if q % 4 == 1 { 1 } else { -1 };
    let r = (1 - q * s) / 4;
    debug_assert_eq!(4 * r + q * s, 1);
    Ok((r, s))
}

/// The quarter sum through `Z_{4q} = Z_4 x Z_q`:
/// `sum_{n=1}^{4} e(-s p n^2 / 4) * sum_{m=1}^{q} e(-r p m^2 / q)`.
pub fn quarter_sum_factored(p: i64, q: u64) -> Result<Complex64> {
    let (r, s) = quarter_bezout(q)?;
    let four: ComplexSum = (1..=4u64)
        .map(|n| root_of_unity(mul_mod(rem_euclid(-s * p, 4), n * n, 4), 4))
        .collect();
    let coeff = rem_euclid(
        (-(i128::from(r) * i128::from(p)) % i128::from(q)) as i64,
        q,
    );
    let odd: ComplexSum = (1..=q)
        .map(|m| root_of_unity(mul_mod(coeff, m * m % q, q), q))
        .collect();
    Ok(four.value() * odd.value())
}

/// `beta(p, q)` from the four-case table indexed by `(p mod 4, q mod 4)`.
pub fn beta(p: ValidatedPrime, q: ValidatedPrime) -> QuarterTurn {
    match (p.mod4(), q.mod4()) {
        (1, 1) => QuarterTurn::One,
        (1, _) => QuarterTurn::MinusI,
        (_, 1) => QuarterTurn::I,
        _ => QuarterTurn::One,
    }
}

/// `(-1)^{(p-1)/2 * (q-1)/2}`.
pub fn reciprocity_sign(p: ValidatedPrime, q: ValidatedPrime) -> i8 {
    if p.mod4() == 3 && q.mod4() == 3 {
        -1
    } else {
        1
    }
}

/// `alpha(p, q) = (-1)^{(p-1)(q-1)/4} beta(p, q)`.
pub fn alpha(p: ValidatedPrime, q: ValidatedPrime) -> QuarterTurn {
    let b = beta(p, q);
    if reciprocity_sign(p, q) < 0 {
        b.times_sign(LegendreValue::MinusOne)
    } else {
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReciprocityReport {
    pub p: ValidatedPrime,
    pub q: ValidatedPrime,
    /// `(q/p)(p/q)`.
    pub lhs_product: i8,
    pub rhs_sign: i8,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub consistent: bool,
    /// `G(q/p) / sqrt(p)`, from the direct sum.
    pub ratio_lhs: Complex64,
    /// `alpha(p, q) G(p/q) / sqrt(q)`, from the direct sum.
    pub ratio_rhs: Complex64,
    pub ratio_residual: f64,
    pub ratio_holds: bool,
}

pub fn reciprocity_check(p: ValidatedPrime, q: ValidatedPrime) -> Result<ReciprocityReport> {
    if p == q {
        return Err(Error::Invalid(format!("p and q must differ (both {p})")));
    }
    let lhs_product = (legendre_symbol(q.get() as i64, p) * legendre_symbol(p.get() as i64, q)).as_i8();
    let rhs_sign = reciprocity_sign(p, q);
    let a = alpha(p, q).to_complex();
    let ratio_lhs = gauss_sum_direct(p.get(), q.get() as i64) / (p.get() as f64).sqrt();
    let ratio_rhs = a * gauss_sum_direct(q.get(), p.get() as i64) / (q.get() as f64).sqrt();
    let ratio_residual = (ratio_lhs - ratio_rhs).norm();
    Ok(ReciprocityReport {
        p,
        q,
        lhs_product,
        rhs_sign,
        alpha: a,
        beta: beta(p, q).to_complex(),
        consistent: lhs_product == rhs_sign,
        ratio_lhs,
        ratio_rhs,
        ratio_residual,
        ratio_holds: ratio_residual <= GAUSS_SUM_TOLERANCE,
    })
}
