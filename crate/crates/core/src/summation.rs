//! Compensated accumulation of complex terms and exact-phase roots of unity.

use std::f64::consts::TAU;
use std::iter::FromIterator;
use std::ops::AddAssign;

use num_complex::Complex64;

/// Neumaier (improved Kahan-Babuska) summation of a real sequence.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Componentwise compensated sum of complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    /// Merges a partial sum computed elsewhere (e.g. another chunk).
    pub fn merge(&mut self, other: &ComplexSum) {
        self.add(Complex64::new(other.re.sum, other.im.sum));
        self.add(Complex64::new(other.re.compensation, other.im.compensation));
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl AddAssign<Complex64> for ComplexSum {
    fn add_assign(&mut self, z: Complex64) {
        self.add(z);
    }
}

impl FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = ComplexSum::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// Compensated sum of an iterator of complex numbers.
pub fn sum_complex<I: IntoIterator<Item = Complex64>>(iter: I) -> Complex64 {
    iter.into_iter().collect::<ComplexSum>().value()
}

/// `exp(2 pi i r / n)` for an integer residue `r`, reduced exactly before
/// the angle is formed so that large arguments never reach `sin`/`cos`.
#[inline]
pub fn root_of_unity(r: u64, n: u64) -> Complex64 {
    debug_assert!(n > 0);
    let r = r % n;
    // Symmetric representative keeps |angle| <= pi.
    let signed = if 2 * r > n {
        -((n - r) as f64)
    } else {
        r as f64
    };
    let (s, c) = (TAU * signed / n as f64).sin_cos();
    Complex64::new(c, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_lost_bits() {
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..10_000 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-12).abs() < 1e-24);

        let naive: f64 = std::iter::once(1.0)
            .chain(std::iter::repeat_n(1e-16, 10_000))
            .chain(std::iter::once(-1.0))
            .sum();
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn neumaier_handles_large_cancelling_terms() {
        let mut acc = CompensatedSum::new();
        for v in [1.0, 1e100, 1.0, -1e100] {
            acc.add(v);
        }
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn merge_matches_single_pass() {
        let terms: Vec<Complex64> = (0..1000)
            .map(|k| root_of_unity(k * k % 97, 97) * (k as f64).sqrt())
            .collect();
        let whole = sum_complex(terms.iter().copied());
        let mut left: ComplexSum = terms[..400].iter().copied().collect();
        let right: ComplexSum = terms[400..].iter().copied().collect();
        left.merge(&right);
        assert!((left.value() - whole).norm() < 1e-12);
    }

    #[test]
    fn roots_of_unity_cancel() {
        for n in (3..=500u64).step_by(2) {
            let s = sum_complex((0..n).map(|k| root_of_unity(k, n)));
            assert!(s.norm() < 1e-12, "n = {n}: {s}");
        }
    }

    #[test]
    fn root_of_unity_quarter_turns() {
        assert!((root_of_unity(1, 4) - Complex64::i()).norm() < 1e-15);
        assert!((root_of_unity(3, 4) + Complex64::i()).norm() < 1e-15);
        assert!((root_of_unity(2, 4) + 1.0).norm() < 1e-15);
        assert!((root_of_unity(9, 4) - Complex64::i()).norm() < 1e-15);
    }
}
