//! Gaussian-damped Gauss sums `G_eps(q/p) = sum_{x in Z} exp(2 pi i q x^2/p - eps x^2)`,
//! the Gaussian Fourier transform, and numerical checks of Poisson summation
//! and of the small-`eps` law `G_eps(q/p) = G(q/p) sqrt(pi/eps) / p + O(1)`.
//!
//! Fourier convention: `f^(k) = (2 pi)^{-1/2} * integral f(x) e^{ikx} dx`, so
//! Poisson summation reads `sum_k f^(k) = sqrt(2 pi) sum_m f(2 pi m)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact_arith::{rem_euclid, ValidatedPrime};
use crate::gauss_sums::gauss_sum_closed;
use crate::summation::{root_of_unity, ComplexSum};

pub const MIN_EPSILON: f64 = 1e-10;
pub const MAX_EPSILON: f64 = 1.0;

/// Truncated tails are dropped once `exp(-exponent)` falls below
/// `exp(-TAIL_EXPONENT)`, about 1.8e-35.
const TAIL_EXPONENT: f64 = 80.0;

const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Auto,
    Radius(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizationParams {
    epsilon: f64,
    truncation: Truncation,
}

impl RegularizationParams {
    pub fn new(epsilon: f64, truncation: Truncation) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::Invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        if truncation == Truncation::Radius(0) {
            return Err(Error::Invalid("truncation radius must be positive".into()));
        }
        Ok(Self {
            epsilon,
            truncation,
        })
    }

    pub fn auto(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, Truncation::Auto)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// `K = ceil(10 / sqrt(eps)) + 10` in auto mode, so `exp(-eps K^2) < e^{-100}`.
    pub fn radius(&self) -> u64 {
        match self.truncation {
            Truncation::Auto => (10.0 / self.epsilon.sqrt()).ceil() as u64 + 10,
            Truncation::Radius(k) => k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedSumResult {
    pub epsilon: f64,
    pub truncation_radius: u64,
    pub value: Complex64,
    /// `G(q/p) sqrt(pi/eps) / p`.
    pub predicted_leading: Complex64,
    pub remainder: Complex64,
}

/// Coefficient `alpha` of `exp(-alpha x^2)`, with `Re(alpha) > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexGaussianSpec {
    alpha: Complex64,
}

impl ComplexGaussianSpec {
    pub fn new(alpha: Complex64) -> Result<Self> {
        if !(alpha.re > 0.0 && alpha.im.is_finite() && alpha.re.is_finite()) {
            return Err(Error::Invalid(format!("Re(alpha) must be positive, got {alpha}")));
        }
        Ok(Self { alpha })
    }

    pub fn real(alpha: f64) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0))
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }
}

/// Fourier transform of `exp(-alpha x^2)`: `exp(-k^2 / (4 alpha)) / sqrt(2 alpha)`,
/// principal square root (positive on the positive real axis).
pub fn gaussian_fourier(spec: &ComplexGaussianSpec, k: f64) -> Complex64 {
    (-(k * k) / (4.0 * spec.alpha)).exp() / (2.0 * spec.alpha).sqrt()
}

/// Smallest `n` with `rate * n^2 >= TAIL_EXPONENT`.
fn tail_cutoff(rate: f64) -> u64 {
    (TAIL_EXPONENT / rate).sqrt().ceil() as u64 + 1
}

/// `term(0) + 2 * sum_{n=1}^{cutoff} term(n)` for an even sequence, smallest terms first.
fn even_series(cutoff: u64, term: impl Fn(u64) -> Complex64) -> Complex64 {
    let mut acc = ComplexSum::new();
    for n in (1..=cutoff).rev() {
        acc.add(2.0 * term(n));
    }
    acc.add(term(0));
    acc.value()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub discrepancy: f64,
}

/// Both sides of `sum_k f^(k) = sqrt(2 pi) sum_m f(2 pi m)` for `f = exp(-alpha x^2)`.
pub fn poisson_check(spec: &ComplexGaussianSpec) -> PoissonCheck {
    let alpha = spec.alpha;
    let lhs_rate = (1.0 / (4.0 * alpha)).re;
    let lhs = even_series(tail_cutoff(lhs_rate), |k| gaussian_fourier(spec, k as f64));
    let rhs_rate = alpha.re * 4.0 * PI * PI;
    let rhs = SQRT_TWO_PI
        * even_series(tail_cutoff(rhs_rate), |m| {
            let x = 2.0 * PI * m as f64;
            (-alpha * x * x).exp()
        });
    PoissonCheck {
        lhs,
        rhs,
        discrepancy: (lhs - rhs).norm(),
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(MIN_EPSILON..=MAX_EPSILON).contains(&epsilon) {
        return Err(Error::Invalid(format!(
            "epsilon {epsilon} outside [{MIN_EPSILON:e}, {MAX_EPSILON}]"
        )));
    }
    Ok(())
}

/// `G(q/p) sqrt(pi / eps) / p`.
pub fn predicted_leading(p: ValidatedPrime, q: i64, epsilon: f64) -> Result<Complex64> {
    Ok(expected_leading_coefficient(p, q)? / epsilon.sqrt())
}

/// `G(q/p) sqrt(pi) / p`, the coefficient of `eps^{-1/2}`.
pub fn expected_leading_coefficient(p: ValidatedPrime, q: i64) -> Result<Complex64> {
    let gs = gauss_sum_closed(p, q)?;
    Ok(gs.numeric * PI.sqrt() / p.get() as f64)
}

/// Direct two-sided sum over `|x| <= K`.
pub fn regularized_gauss_sum(
    p: ValidatedPrime,
    q: i64,
    params: &RegularizationParams,
) -> Result<RegularizedSumResult> {
    let epsilon = params.epsilon();
    check_epsilon(epsilon)?;
    let predicted = predicted_leading(p, q, epsilon)?;
    let modulus = p.get();
    let q = rem_euclid(q, modulus);
    let roots: Vec<Complex64> = (0..modulus)
        .map(|r| root_of_unity(q * r % modulus, modulus))
        .collect();
    let radius = params.radius();
    let value = even_series(radius, |x| {
        let residue = ((u128::from(x) * u128::from(x)) % u128::from(modulus)) as usize;
        let xf = x as f64;
        roots[residue] * (-epsilon * xf * xf).exp()
    });
    Ok(RegularizedSumResult {
        epsilon,
        truncation_radius: radius,
        value,
        predicted_leading: predicted,
        remainder: value - predicted,
    })
}

/// The Poisson-dual side `sqrt(2 pi) sum_k f^(2 pi k)` with the exact transform
/// at `alpha = eps - 2 pi i q / p`.
pub fn poisson_side_sum(p: ValidatedPrime, q: i64, epsilon: f64) -> Result<Complex64> {
    check_epsilon(epsilon)?;
    let q = rem_euclid(q, p.get());
    let alpha = Complex64::new(epsilon, -2.0 * PI * q as f64 / p.get() as f64);
    let spec = ComplexGaussianSpec::new(alpha)?;
    // |f^(2 pi k)| ~ exp(-pi^2 k^2 Re(1/alpha))
    let rate = PI * PI * (1.0 / alpha).re;
    let series = even_series(tail_cutoff(rate), |k| {
        gaussian_fourier(&spec, 2.0 * PI * k as f64)
    });
    Ok(SQRT_TWO_PI * series)
}

/// Least-squares `c` in `G_eps(q/p) ~ c eps^{-1/2}` over the grid.
pub fn leading_coefficient_fit(p: ValidatedPrime, q: i64, eps_grid: &[f64]) -> Result<Complex64> {
    if eps_grid.len() < 2 {
        return Err(Error::Invalid("epsilon grid needs at least two points".into()));
    }
    for &e in eps_grid {
        check_epsilon(e)?;
    }
    let lo = eps_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eps_grid.iter().copied().fold(0.0, f64::max);
    if hi / lo < 1e3 * (1.0 - 1e-12) {
        return Err(Error::Invalid(format!(
            "epsilon grid [{lo:e}, {hi:e}] spans fewer than three decades"
        )));
    }
    Ok(fit_coefficient(&eps_sweep(p, q, eps_grid)?))
}

/// Least-squares `c` in `value ~ c eps^{-1/2}` over already computed sums.
pub fn fit_coefficient(results: &[RegularizedSumResult]) -> Complex64 {
    let mut num = ComplexSum::new();
    let mut den = 0.0;
    for r in results {
        let w = r.epsilon.sqrt().recip();
        num.add(r.value * w);
        den += w * w;
    }
    num.value() / den
}

/// `max_eps |remainder| <= 3 (1 + |remainder(eps_0)|)`, with `eps_0` the
/// first (largest) grid point.
pub fn remainder_bounded(results: &[RegularizedSumResult]) -> bool {
    let Some(first) = results.first() else {
        return true;
    };
    let bound = 3.0 * (1.0 + first.remainder.norm());
    results.iter().all(|r| r.remainder.norm() <= bound)
}

/// `eps = 10^e` for each integer exponent between the bounds, largest `eps` first.
pub fn decade_grid(lo: i32, hi: i32) -> Vec<f64> {
    let (a, b) = (lo.min(hi), lo.max(hi));
    (a..=b).rev().map(|e| 10f64.powi(e)).collect()
}

/// `regularized_gauss_sum` at every point of the grid, in grid order.
pub fn eps_sweep(p: ValidatedPrime, q: i64, grid: &[f64]) -> Result<Vec<RegularizedSumResult>> {
    grid.iter()
        .map(|&e| regularized_gauss_sum(p, q, &RegularizationParams::auto(e)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> ValidatedPrime {
        ValidatedPrime::new(n).unwrap()
    }

    /// Oracle: trapezoid rule for `(2 pi)^{-1/2} int exp(-alpha x^2 + i k x) dx`.
    /// Spectrally accurate for Gaussian integrands on a wide enough window.
    fn fourier_by_quadrature(alpha: Complex64, k: f64) -> Complex64 {
        let half_width = (80.0 / alpha.re).sqrt();
        let n = 40_000;
        let h = 2.0 * half_width / n as f64;
        let mut acc = ComplexSum::new();
        for j in 0..=n {
            let x = -half_width + j as f64 * h;
            acc.add((-alpha * x * x + Complex64::new(0.0, k * x)).exp());
        }
        acc.value() * h / SQRT_TWO_PI
    }

    #[test]
    fn fourier_examples() {
        let half = ComplexGaussianSpec::real(0.5).unwrap();
        assert!((gaussian_fourier(&half, 0.0) - 1.0).norm() < 1e-15);
        let one = ComplexGaussianSpec::real(1.0).unwrap();
        assert!((gaussian_fourier(&one, 0.0) - 0.5f64.sqrt()).norm() < 1e-15);
        let expected = 0.5f64.sqrt() * (-1.0f64).exp();
        assert!((gaussian_fourier(&one, 2.0) - expected).norm() < 1e-15);
        assert!((fourier_by_quadrature(Complex64::new(1.0, 0.0), 2.0) - expected).norm() < 1e-12);
    }

    #[test]
    fn fourier_matches_quadrature_for_complex_alpha() {
        for (re, im) in [(1.0, 0.0), (0.3, 1.1), (2.0, -3.0), (0.05, 0.5)] {
            let alpha = Complex64::new(re, im);
            let spec = ComplexGaussianSpec::new(alpha).unwrap();
            for k in [0.0, 0.7, 2.0, -3.5] {
                let closed = gaussian_fourier(&spec, k);
                let quad = fourier_by_quadrature(alpha, k);
                assert!((closed - quad).norm() < 1e-10, "alpha={alpha} k={k}: {closed} vs {quad}");
            }
        }
    }

    #[test]
    fn gauss_integral_recovered() {
        for a in [0.01, 0.5, 1.0, 7.0, 123.0] {
            let spec = ComplexGaussianSpec::real(a).unwrap();
            let lhs = SQRT_TWO_PI * gaussian_fourier(&spec, 0.0);
            assert!((lhs - (PI / a).sqrt()).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_positive_real_part() {
        assert!(ComplexGaussianSpec::new(Complex64::new(0.0, 1.0)).is_err());
        assert!(ComplexGaussianSpec::real(-1.0).is_err());
        assert!(RegularizationParams::auto(0.0).is_err());
        assert!(RegularizationParams::new(0.1, Truncation::Radius(0)).is_err());
        let params = RegularizationParams::auto(1e-11).unwrap();
        assert!(regularized_gauss_sum(p(5), 1, &params).is_err());
        let params = RegularizationParams::auto(2.0).unwrap();
        assert!(regularized_gauss_sum(p(5), 1, &params).is_err());
        assert!(poisson_side_sum(p(5), 1, 0.0).is_err());
        assert!(regularized_gauss_sum(p(5), 10, &RegularizationParams::auto(0.1).unwrap()).is_err());
    }

    #[test]
    fn auto_radius_tail() {
        for e in [1e-10, 1e-6, 0.01, 1.0] {
            let k = RegularizationParams::auto(e).unwrap().radius() as f64;
            assert!((-e * k * k).exp() < 1e-40);
        }
    }

    #[test]
    fn poisson_examples() {
        let c = poisson_check(&ComplexGaussianSpec::real(0.1).unwrap());
        // both sides summed independently in f64 outside this crate
        assert!((c.lhs.re - 2.603_366_286_626_703).abs() < 1e-12);
        assert!(c.discrepancy < 1e-10);
        let c = poisson_check(&ComplexGaussianSpec::real(1.0).unwrap());
        assert!(c.discrepancy < 1e-12);
        let c = poisson_check(&ComplexGaussianSpec::real(50.0).unwrap());
        assert!((c.rhs.re - SQRT_TWO_PI).abs() < 1e-12);
        assert!(c.discrepancy < 1e-12);
    }

    #[test]
    fn poisson_side_examples() {
        let direct = |pp: u64, q: i64, e: f64| {
            regularized_gauss_sum(p(pp), q, &RegularizationParams::auto(e).unwrap())
                .unwrap()
                .value
        };
        assert!((poisson_side_sum(p(5), 1, 0.1).unwrap() - direct(5, 1, 0.1)).norm() < 1e-9);
        assert!((poisson_side_sum(p(3), 1, 0.01).unwrap() - direct(3, 1, 0.01)).norm() < 1e-9);
        assert!((poisson_side_sum(p(7), 2, 0.5).unwrap() - direct(7, 2, 0.5)).norm() < 1e-10);
    }

    #[test]
    fn regularized_examples() {
        let r = regularized_gauss_sum(p(5), 1, &RegularizationParams::auto(1e-4).unwrap()).unwrap();
        let expected = 5f64.sqrt() * (PI * 1e4).sqrt() / 5.0;
        assert!((r.predicted_leading.re - expected).abs() < 1e-9);
        assert!((r.predicted_leading.re - 79.266).abs() < 1e-3);
        assert!(r.remainder.norm() < 1.0);

        let r = regularized_gauss_sum(p(3), 1, &RegularizationParams::auto(1e-4).unwrap()).unwrap();
        let expected = Complex64::new(0.0, 3f64.sqrt() * (PI * 1e4).sqrt() / 3.0);
        assert!((r.predicted_leading - expected).norm() < 1e-9);
        assert!(r.remainder.norm() < 1.0);

        // eps = 1: plain damped sum, compared against a direct loop.
        let r = regularized_gauss_sum(p(5), 1, &RegularizationParams::auto(1.0).unwrap()).unwrap();
        let brute: Complex64 = (-40i64..=40)
            .map(|k| {
                let k2 = (k * k) as f64;
                Complex64::from_polar((-k2).exp(), 2.0 * PI * k2 / 5.0)
            })
            .sum();
        assert!((r.value - brute).norm() < 1e-13);
    }

    #[test]
    fn doubling_radius_is_stable() {
        for e in [1.0, 0.1, 1e-3] {
            let auto = RegularizationParams::auto(e).unwrap();
            let doubled = RegularizationParams::new(e, Truncation::Radius(2 * auto.radius())).unwrap();
            let a = regularized_gauss_sum(p(7), 3, &auto).unwrap().value;
            let b = regularized_gauss_sum(p(7), 3, &doubled).unwrap().value;
            assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn fit_examples() {
        let grid: Vec<f64> = decade_grid(-7, -3);
        let c = leading_coefficient_fit(p(5), 1, &grid).unwrap();
        assert!((c.re - 0.79266).abs() < 1e-4);
        let c = leading_coefficient_fit(p(3), 1, &grid).unwrap();
        let expected = Complex64::new(0.0, 3f64.sqrt() * PI.sqrt() / 3.0);
        assert!((c - expected).norm() < 1e-3 * expected.norm());
        let c = leading_coefficient_fit(p(13), 2, &grid).unwrap();
        let expected = -(13f64.sqrt()) * PI.sqrt() / 13.0;
        assert!((c.re - expected).abs() < 1e-3 * expected.abs());

        assert!(leading_coefficient_fit(p(5), 1, &[1e-3, 1e-4]).is_err());
        assert!(leading_coefficient_fit(p(5), 1, &[1e-3]).is_err());
    }

    #[test]
    fn decade_grid_order() {
        assert_eq!(decade_grid(-3, -1), vec![1e-1, 1e-2, 1e-3]);
        assert_eq!(decade_grid(-1, -3), vec![1e-1, 1e-2, 1e-3]);
    }
}
