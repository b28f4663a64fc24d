//! The Gauss integral over the p-adic unit ball,
//! `I(a, b) = integral_{Z_p} chi_p(a x^2 + b x) d mu(x)` for odd `p`.
//!
//! Closed form:
//! * `|a|_p <= 1`: `I = Omega(|b|_p)`;
//! * `|a|_p > 1`: `I = lambda_p(a) |a|_p^{-1/2} chi_p(-b^2 / (4a)) Omega(|b/a|_p)`.
//!
//! The oracle averages the integrand over `Z / p^M` with `M` deep enough that
//! `chi_p(a x^2 + b x)` is constant on every coset `k + p^M Z_p`.

use std::fmt;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact_arith::{legendre_symbol, LegendreValue, ValidatedPrime};
use crate::gauss_sums::QuarterTurn;
use crate::padic::{omega_of_norm, PAdicNumber};
use crate::summation::{root_of_unity, ComplexSum};

/// Deepest oracle level, `p^M` terms.
pub const MAX_ORACLE_DEPTH: u32 = 7;
/// Hard cap on the number of oracle terms.
pub const MAX_ORACLE_TERMS: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    SmallA,
    ZeroByOscillation,
    Quadratic,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::SmallA => "small_a",
            CaseTag::ZeroByOscillation => "zero_by_oscillation",
            CaseTag::Quadratic => "quadratic",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `lambda_p(a)`, a fourth root of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LambdaValue(pub QuarterTurn);

impl LambdaValue {
    pub fn to_complex(self) -> Complex64 {
        self.0.to_complex()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralComponents {
    /// 1 in the `small_a` case.
    pub lambda: Complex64,
    /// `|a|_p^{-1/2}`, 1 in the `small_a` case.
    pub norm_factor: f64,
    /// `chi_p(-b^2 / (4a))`, 1 in the `small_a` case.
    pub phase: Complex64,
    /// `Omega(|b|_p)` or `Omega(|b/a|_p)`.
    pub gate: u8,
}

impl IntegralComponents {
    pub fn product(&self) -> Complex64 {
        self.lambda * self.norm_factor * self.phase * f64::from(self.gate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: Complex64,
    pub case_tag: CaseTag,
    pub components: IntegralComponents,
}

fn check_pair(a: &PAdicNumber, b: &PAdicNumber) -> Result<ValidatedPrime> {
    if a.prime() != b.prime() {
        return Err(Error::MixedPrimes(a.prime().get(), b.prime().get()));
    }
    Ok(a.prime())
}

/// `|a|_p = p^N`; returns `N` when it is positive.
fn blowup_exponent(a: &PAdicNumber) -> Option<i64> {
    a.valuation().filter(|&v| v < 0).map(|v| -v)
}

/// `lambda_p(a)` for `|a|_p = p^N`, `N >= 1`: 1 for even `N`; otherwise
/// `(a_0/p)` when `p = 1 mod 4` and `i (a_0/p)` when `p = 3 mod 4`.
pub fn lambda_p(a: &PAdicNumber) -> Result<LambdaValue> {
    let n = blowup_exponent(a)
        .ok_or_else(|| Error::Invalid("lambda_p needs |a|_p > 1".into()))?;
    if n % 2 == 0 {
        return Ok(LambdaValue(QuarterTurn::One));
    }
    let p = a.prime();
    let a0 = a.leading_digit().expect("nonzero value has a leading digit");
    let symbol = legendre_symbol(i64::from(a0), p);
    let base = if p.mod4() == 1 {
        QuarterTurn::One
    } else {
        QuarterTurn::I
    };
    Ok(LambdaValue(base.times_sign(symbol)))
}

pub fn closed_form_integral(a: &PAdicNumber, b: &PAdicNumber) -> Result<IntegralResult> {
    let p = check_pair(a, b)?;
    let one = Complex64::new(1.0, 0.0);
    let Some(n) = blowup_exponent(a) else {
        let gate = omega_of_norm(&b.norm());
        return Ok(IntegralResult {
            value: Complex64::new(f64::from(gate), 0.0),
            case_tag: CaseTag::SmallA,
            components: IntegralComponents {
                lambda: one,
                norm_factor: 1.0,
                phase: one,
                gate,
            },
        });
    };
    let lambda = lambda_p(a)?.to_complex();
    let norm_factor = (p.get() as f64).powf(-(n as f64) / 2.0);
    let ratio_small = b.valuation().is_none_or(|vb| vb >= -n);
    let gate = u8::from(ratio_small);
    let phase = if b.is_zero() {
        one
    } else {
        let precision = a.precision().max(b.precision());
        let four = PAdicNumber::from_integer(4, p, precision)?;
        let shift = b.mul(b)?.div(&four.mul(a)?)?.neg();
        if let Some(v) = shift.valuation() {
            if v < 0 && shift.precision() < v.unsigned_abs() as usize {
                return Err(Error::Invalid(format!(
                    "precision {} too small to resolve chi_p(-b^2/4a)",
                    shift.precision()
                )));
            }
        }
        shift.chi()
    };
    let components = IntegralComponents {
        lambda,
        norm_factor,
        phase,
        gate,
    };
    Ok(IntegralResult {
        value: components.product(),
        case_tag: if ratio_small {
            CaseTag::Quadratic
        } else {
            CaseTag::ZeroByOscillation
        },
        components,
    })
}

/// Smallest oracle depth: `max(0, -v(a), -v(b))`.
pub fn oracle_depth(a: &PAdicNumber, b: &PAdicNumber) -> u32 {
    let need = |x: &PAdicNumber| x.valuation().map_or(0, |v| (-v).max(0));
    need(a).max(need(b)) as u32
}

/// `{x} * p^m` as an integer; requires `p^m` to clear the denominator.
fn scaled_frac(x: &PAdicNumber, modulus: u64) -> u64 {
    let f = x.frac_part();
    let den = f.denominator.to_u64().expect("denominator fits the modulus");
    let num = f.numerator.to_u64().expect("numerator below denominator");
    debug_assert_eq!(modulus % den, 0);
    num * (modulus / den)
}

/// `p^{-m} sum_{k=0}^{p^m - 1} chi_p(a (k+shift)^2 + b (k+shift))`.
pub fn oracle_sum(a: &PAdicNumber, b: &PAdicNumber, depth: u32, shift: u64) -> Result<Complex64> {
    let p = check_pair(a, b)?;
    if depth < oracle_depth(a, b) {
        return Err(Error::Invalid(format!(
            "oracle depth {depth} is below the required {}",
            oracle_depth(a, b)
        )));
    }
    let modulus = p
        .get()
        .checked_pow(depth)
        .filter(|&m| m <= MAX_ORACLE_TERMS)
        .ok_or_else(|| Error::Invalid(format!("{p}^{depth} oracle terms exceed the cap")))?;
    let qa = scaled_frac(a, modulus);
    let qb = scaled_frac(b, modulus);
    let mut acc = ComplexSum::new();
    for k in 0..modulus {
        let x = (k + shift % modulus) % modulus;
        // modulus <= MAX_ORACLE_TERMS, so these products stay below 2^63
        let phase = (qa * (x * x % modulus) + qb * x) % modulus;
        acc.add(root_of_unity(phase, modulus));
    }
    Ok(acc.value() / modulus as f64)
}

/// Haar average of `chi_p(a x^2 + b x)` over `Z_p`, by finite enumeration.
pub fn brute_force_integral(a: &PAdicNumber, b: &PAdicNumber) -> Result<Complex64> {
    let depth = oracle_depth(a, b);
    if depth > MAX_ORACLE_DEPTH {
        return Err(Error::Invalid(format!(
            "oracle depth {depth} exceeds {MAX_ORACLE_DEPTH}"
        )));
    }
    oracle_sum(a, b, depth, 0)
}

/// `lambda'_p(a)` as produced by conjugating the integral at `-a`:
/// 1 for even `N`, `(-a_0/p)` when `p = 1 mod 4`, `-i (-a_0/p)` when `p = 3 mod 4`.
pub fn lambda_prime(a: &PAdicNumber) -> Result<LambdaValue> {
    let n = blowup_exponent(a)
        .ok_or_else(|| Error::Invalid("lambda'_p needs |a|_p > 1".into()))?;
    if n % 2 == 0 {
        return Ok(LambdaValue(QuarterTurn::One));
    }
    let p = a.prime();
    let a0 = i64::from(a.leading_digit().expect("nonzero"));
    let symbol: LegendreValue = legendre_symbol(-a0, p);
    let base = if p.mod4() == 1 {
        QuarterTurn::One
    } else {
        QuarterTurn::MinusI
    };
    Ok(LambdaValue(base.times_sign(symbol)))
}

/// Tolerance for the conjugation identity on closed-form values.
const CONJUGATION_TOLERANCE: f64 = 1e-12;
/// Tolerance when the oracle is involved.
const ORACLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugationReport {
    /// `closed(-a, -b) = conj(closed(a, b))`.
    pub closed_conjugate: bool,
    /// `lambda'_p(a) = lambda_p(a)` and `conj(lambda_p(-a)) = lambda_p(a)`.
    pub lambda_agrees: bool,
    /// `oracle(-a, -b) = conj(oracle(a, b))` and the oracle matches `closed(-a, -b)`.
    pub oracle_conjugate: bool,
}

impl ConjugationReport {
    pub fn holds(&self) -> bool {
        self.closed_conjugate && self.lambda_agrees && self.oracle_conjugate
    }
}

pub fn conjugation_report(a: &PAdicNumber, b: &PAdicNumber) -> Result<ConjugationReport> {
    check_pair(a, b)?;
    let (na, nb) = (a.neg(), b.neg());
    let direct = closed_form_integral(a, b)?.value;
    let flipped = closed_form_integral(&na, &nb)?.value;
    let closed_conjugate = (flipped - direct.conj()).norm() <= CONJUGATION_TOLERANCE;

    let lambda_agrees = match blowup_exponent(a) {
        None => true,
        Some(_) => {
            let lam = lambda_p(a)?;
            lam == lambda_prime(a)? && LambdaValue(lambda_p(&na)?.0.conj()) == lam
        }
    };

    let oracle_direct = brute_force_integral(a, b)?;
    let oracle_flipped = brute_force_integral(&na, &nb)?;
    let oracle_conjugate = (oracle_flipped - oracle_direct.conj()).norm() <= ORACLE_TOLERANCE
        && (oracle_flipped - flipped).norm() <= ORACLE_TOLERANCE;

    Ok(ConjugationReport {
        closed_conjugate,
        lambda_agrees,
        oracle_conjugate,
    })
}

/// Checks that the sign-flipped integral is the complex conjugate and that
/// the single `lambda_p` table covers both parities of the leading digit.
pub fn conjugation_consistency(a: &PAdicNumber, b: &PAdicNumber) -> Result<bool> {
    Ok(conjugation_report(a, b)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss_sums::gauss_sum_direct;
    use crate::padic::DEFAULT_PRECISION;

    fn p(n: u64) -> ValidatedPrime {
        ValidatedPrime::new(n).unwrap()
    }

    fn q(num: i64, den: i64, prime: u64) -> PAdicNumber {
        PAdicNumber::from_rational(num, den, p(prime), DEFAULT_PRECISION).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_p(&q(1, 25, 5)).unwrap().0, QuarterTurn::One);
        assert_eq!(lambda_p(&q(1, 5, 5)).unwrap().0, QuarterTurn::One);
        assert_eq!(lambda_p(&q(1, 3, 3)).unwrap().0, QuarterTurn::I);
        assert_eq!(lambda_p(&q(2, 5, 5)).unwrap().0, QuarterTurn::MinusOne);
        assert!(lambda_p(&q(1, 1, 5)).is_err());
        assert!(lambda_p(&PAdicNumber::zero(p(5))).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let r = closed_form_integral(&q(1, 1, 5), &q(1, 1, 5)).unwrap();
        assert_eq!((r.value, r.case_tag), (Complex64::new(1.0, 0.0), CaseTag::SmallA));
        let r = closed_form_integral(&q(1, 1, 5), &q(1, 5, 5)).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));

        let zero = PAdicNumber::zero(p(5));
        let r = closed_form_integral(&q(1, 5, 5), &zero).unwrap();
        assert_eq!(r.case_tag, CaseTag::Quadratic);
        assert!(close(r.value, Complex64::new(5f64.powf(-0.5), 0.0), 1e-15));
        let oracle = gauss_sum_direct(5, 1) / 5.0;
        assert!(close(r.value, oracle, 1e-12));

        let r = closed_form_integral(&q(1, 3, 3), &PAdicNumber::zero(p(3))).unwrap();
        assert!(close(r.value, Complex64::new(0.0, 3f64.powf(-0.5)), 1e-15));
        assert!(close(r.value, gauss_sum_direct(3, 1) / 3.0, 1e-12));

        let r = closed_form_integral(&q(1, 5, 5), &q(1, 25, 5)).unwrap();
        assert_eq!(r.case_tag, CaseTag::ZeroByOscillation);
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
        let oracle = brute_force_integral(&q(1, 5, 5), &q(1, 25, 5)).unwrap();
        assert!(oracle.norm() < 1e-12);

        assert!(closed_form_integral(&q(1, 5, 5), &q(1, 5, 7)).is_err());
    }

    #[test]
    fn oracle_examples() {
        let zero = PAdicNumber::zero(p(5));
        let v = brute_force_integral(&q(2, 5, 5), &zero).unwrap();
        assert!(close(v, Complex64::new(-(5f64.powf(-0.5)), 0.0), 1e-12));
        assert!(close(v, gauss_sum_direct(5, 2) / 5.0, 1e-12));
        assert!(close(brute_force_integral(&q(3, 1, 5), &zero).unwrap(), Complex64::new(1.0, 0.0), 0.0));
        let (a, b) = (q(1, 25, 5), q(1, 5, 5));
        let oracle = brute_force_integral(&a, &b).unwrap();
        let closed = closed_form_integral(&a, &b).unwrap().value;
        assert!(close(oracle, closed, 1e-12), "{oracle} vs {closed}");
    }

    #[test]
    fn oracle_depth_limits() {
        let tiny = q(1, 5i64.pow(8), 5);
        assert!(brute_force_integral(&tiny, &q(1, 1, 5)).is_err());
        assert!(oracle_sum(&q(1, 25, 5), &q(1, 1, 5), 1, 0).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let zero5 = PAdicNumber::zero(p(5));
        assert!(conjugation_consistency(&q(2, 5, 5), &zero5).unwrap());
        assert!(conjugation_consistency(&q(1, 3, 3), &PAdicNumber::zero(p(3))).unwrap());
        assert!(conjugation_consistency(&q(1, 1, 5), &q(1, 1, 5)).unwrap());
        assert!(conjugation_consistency(&q(3, 125, 5), &q(2, 25, 5)).unwrap());
    }

    #[test]
    fn magnitudes_follow_case_tag() {
        for prime in [3u64, 5, 7] {
            for av in -3i64..=1 {
                for bv in -3i64..=2 {
                    let a = PAdicNumber::from_digits(p(prime), av, &[1, 2, 0, 1, 0, 0, 0, 0]).unwrap();
                    let b = PAdicNumber::from_digits(p(prime), bv, &[2, 1, 1, 0, 0, 0, 0, 0]).unwrap();
                    let r = closed_form_integral(&a, &b).unwrap();
                    let m = r.value.norm();
                    match r.case_tag {
                        CaseTag::SmallA => assert!(m == 0.0 || m == 1.0),
                        CaseTag::ZeroByOscillation => assert_eq!(m, 0.0),
                        CaseTag::Quadratic => {
                            assert!((m - a.norm().to_f64().powf(-0.5)).abs() < 1e-14)
                        }
                    }
                    assert!(close(r.value, r.components.product(), 0.0));
                }
            }
        }
    }

    #[test]
    fn lambda_ties_back_to_gauss_sums() {
        for prime in [3u64, 5, 7, 11, 13] {
            for u in 1..prime as i64 {
                let r = closed_form_integral(&q(u, prime as i64, prime), &PAdicNumber::zero(p(prime)))
                    .unwrap();
                let scaled = r.value * (prime as f64).sqrt();
                let gauss = gauss_sum_direct(prime, u) / (prime as f64).sqrt();
                assert!(close(scaled, gauss, 1e-12), "p={prime} u={u}");
            }
        }
    }

    #[test]
    fn oracle_is_translation_invariant() {
        let a = q(3, 25, 5);
        let b = q(7, 5, 5);
        let base = oracle_sum(&a, &b, 2, 0).unwrap();
        for shift in [1u64, 7, 24, 1000] {
            assert!(close(oracle_sum(&a, &b, 2, shift).unwrap(), base, 1e-12));
        }
    }

    #[test]
    fn oracle_is_depth_stable() {
        let a = q(4, 49, 7);
        let b = q(3, 7, 7);
        let m = oracle_depth(&a, &b);
        let v0 = oracle_sum(&a, &b, m, 0).unwrap();
        let v1 = oracle_sum(&a, &b, m + 1, 0).unwrap();
        assert!(close(v0, v1, 1e-12));
    }
}
