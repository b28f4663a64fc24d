//! The end-to-end verification suite behind `gaussum verify-all`.
//!
//! Every check compares a closed form against an independent route (direct
//! summation, the Poisson-dual side, the finite oracle) at a fixed tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exact_arith::ValidatedPrime;
use crate::gauss_sums::{gauss_sum_closed, gauss_sum_direct, reciprocity_check, GAUSS_SUM_TOLERANCE};
use crate::padic::{PAdicNumber, DEFAULT_PRECISION};
use crate::padic_integral::{
    brute_force_integral, closed_form_integral, conjugation_consistency, oracle_depth, oracle_sum,
    CaseTag,
};
use crate::regularized::{
    decade_grid, eps_sweep, expected_leading_coefficient, fit_coefficient, poisson_check,
    poisson_side_sum, regularized_gauss_sum, remainder_bounded, ComplexGaussianSpec,
    RegularizationParams,
};

pub const SWEEP_PRIMES: [u64; 4] = [3, 5, 7, 11];
pub const POISSON_ALPHAS: [f64; 6] = [0.05, 0.1, 0.5, 1.0, 5.0, 50.0];
pub const FIT_TOLERANCE: f64 = 1e-2;
pub const ORACLE_TOLERANCE: f64 = 1e-9;
pub const M_STABILITY_TOLERANCE: f64 = 1e-12;
pub const M_STABILITY_CASES: usize = 200;
const M_STABILITY_SEED: u64 = 0x5e_ed0f_9a55;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    /// Largest observed error in the check's own metric.
    pub max_error: f64,
    pub tolerance: f64,
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: usize,
    max_error: f64,
}

impl Tally {
    fn record(&mut self, error: f64, tolerance: f64) {
        self.cases += 1;
        // NaN counts as a failure
        if !(error <= tolerance) {
            self.failures += 1;
        }
        if error.is_nan() || error > self.max_error {
            self.max_error = error;
        }
    }

    fn record_bool(&mut self, ok: bool) {
        self.cases += 1;
        self.failures += usize::from(!ok);
    }

    fn finish(self, id: u8, name: &'static str, tolerance: f64, extra_ok: bool) -> CheckOutcome {
        CheckOutcome {
            id,
            name,
            passed: self.failures == 0 && extra_ok && self.cases > 0,
            cases: self.cases,
            failures: self.failures,
            max_error: self.max_error,
            tolerance,
        }
    }
}

fn prime(n: u64) -> ValidatedPrime {
    ValidatedPrime::new(n).expect("suite primes are odd primes")
}

/// Closed form against direct summation, all odd primes below 500.
pub fn check_gauss_closed_form() -> CheckOutcome {
    let mut t = Tally::default();
    for p in ValidatedPrime::up_to(499) {
        let root = (p.get() as f64).sqrt();
        for q in 1..p.get() as i64 {
            let closed = gauss_sum_closed(p, q).expect("q coprime to p");
            let err = (gauss_sum_direct(p.get(), q) - closed.numeric).norm() / root;
            t.record(err, GAUSS_SUM_TOLERANCE);
        }
    }
    t.finish(1, "gauss_sum_closed_form", GAUSS_SUM_TOLERANCE, true)
}

/// Both forms of reciprocity on ordered pairs of distinct odd primes <= 199.
pub fn check_reciprocity() -> CheckOutcome {
    let primes = ValidatedPrime::up_to(199);
    let mut t = Tally::default();
    let mut exact_ok = true;
    for &p in &primes {
        for &q in &primes {
            if p == q {
                continue;
            }
            let r = reciprocity_check(p, q).expect("distinct primes");
            exact_ok &= r.consistent;
            t.record(if r.consistent { r.ratio_residual } else { f64::INFINITY }, GAUSS_SUM_TOLERANCE);
        }
    }
    t.finish(2, "reciprocity", GAUSS_SUM_TOLERANCE, exact_ok)
}

/// Poisson summation on real Gaussians, and the exact identity between the
/// direct regularized sum and its Poisson-dual side.
pub fn check_poisson() -> CheckOutcome {
    let mut t = Tally::default();
    let mut relative_ok = true;
    for &alpha in &POISSON_ALPHAS {
        let c = poisson_check(&ComplexGaussianSpec::real(alpha).expect("positive alpha"));
        t.record(c.discrepancy, 1e-10);
    }
    for p in [3u64, 5, 7, 13] {
        for q in [1i64, 2] {
            for eps in [1.0, 0.1, 0.01] {
                let direct = regularized_gauss_sum(prime(p), q, &RegularizationParams::auto(eps).unwrap())
                    .expect("valid inputs")
                    .value;
                let dual = poisson_side_sum(prime(p), q, eps).expect("valid inputs");
                let scaled = (direct - dual).norm() / (1.0 + direct.norm());
                relative_ok &= scaled <= 1e-9;
                t.cases += 1;
                t.failures += usize::from(!(scaled <= 1e-9));
            }
        }
    }
    t.finish(3, "poisson_identity", 1e-10, relative_ok)
}

/// Fitted `eps^{-1/2}` coefficient within 1% of `G(q/p) sqrt(pi) / p`, and
/// non-growth of the remainder from `eps = 1e-2` down to `1e-8`.
pub fn check_asymptotics() -> CheckOutcome {
    let mut t = Tally::default();
    let mut bounded = true;
    for p in [3u64, 5, 7, 13] {
        for q in [1i64, 2] {
            let p = prime(p);
            let fit = fit_coefficient(&eps_sweep(p, q, &decade_grid(-7, -3)).expect("valid grid"));
            let expected = expected_leading_coefficient(p, q).expect("coprime");
            t.record((fit - expected).norm() / expected.norm(), FIT_TOLERANCE);
            let sweep = eps_sweep(p, q, &decade_grid(-8, -2)).expect("valid grid");
            bounded &= remainder_bounded(&sweep);
        }
    }
    t.finish(4, "asymptotic_law", FIT_TOLERANCE, bounded)
}

/// Digits for a sweep element: the leading digit, then a fixed pattern.
fn sweep_digits(p: u64, lead: u32) -> Vec<u32> {
    let p32 = p as u32;
    let mut d = vec![lead, (3 * lead + 1) % p32, (lead + 2) % p32, 1];
    d.resize(DEFAULT_PRECISION, 0);
    d
}

/// The `(a, b)` grid of the p-adic sweep: valuations of `a` in `[-4, 1]` with
/// every leading digit, valuations of `b` in `[-4, 2]` with leading digits
/// `{1, 2, p-1}`, plus `b = 0`.
pub fn padic_sweep() -> Vec<(PAdicNumber, PAdicNumber)> {
    let mut cases = Vec::new();
    for &pn in &SWEEP_PRIMES {
        let p = prime(pn);
        let mut b_leads: Vec<u32> = vec![1, 2, pn as u32 - 1];
        b_leads.sort_unstable();
        b_leads.dedup();
        let mut bs = vec![PAdicNumber::zero(p)];
        for vb in -4..=2 {
            for &lead in &b_leads {
                let digits = sweep_digits(pn, lead);
                bs.push(PAdicNumber::from_digits(p, vb, &digits).expect("digits below p"));
            }
        }
        for va in -4..=1 {
            for lead in 1..pn as u32 {
                let a = PAdicNumber::from_digits(p, va, &sweep_digits(pn, lead)).expect("digits below p");
                for b in &bs {
                    cases.push((a.clone(), b.clone()));
                }
            }
        }
    }
    cases
}

/// Closed form against the finite oracle across the sweep.
pub fn check_padic_theorem() -> CheckOutcome {
    let mut t = Tally::default();
    let mut tags = [false; 3];
    let mut parities = [false; 2];
    for (a, b) in padic_sweep() {
        let closed = closed_form_integral(&a, &b).expect("sweep inputs are valid");
        let oracle = brute_force_integral(&a, &b).expect("sweep depth within cap");
        t.record((closed.value - oracle).norm(), ORACLE_TOLERANCE);
        let tag_index = match closed.case_tag {
            CaseTag::SmallA => 0,
            CaseTag::ZeroByOscillation => 1,
            CaseTag::Quadratic => 2,
        };
        tags[tag_index] = true;
        if closed.case_tag == CaseTag::Quadratic {
            let n = -a.valuation().expect("nonzero");
            parities[(n % 2) as usize] = true;
        }
    }
    let coverage = t.cases >= 2000 && tags.iter().all(|&x| x) && parities.iter().all(|&x| x);
    t.finish(5, "padic_gauss_integral", ORACLE_TOLERANCE, coverage)
}

/// `lambda'_p = lambda_p` and conjugation symmetry across the sweep.
pub fn check_conjugation() -> CheckOutcome {
    let mut t = Tally::default();
    for (a, b) in padic_sweep() {
        t.record_bool(conjugation_consistency(&a, &b).unwrap_or(false));
    }
    t.finish(6, "lambda_conjugation", 0.0, true)
}

fn random_element(rng: &mut ChaCha8Rng, p: ValidatedPrime, lo: i64, hi: i64) -> PAdicNumber {
    let pn = p.get() as u32;
    let v = rng.gen_range(lo..=hi);
    let mut digits: Vec<u32> = (0..DEFAULT_PRECISION).map(|_| rng.gen_range(0..pn)).collect();
    digits[0] = rng.gen_range(1..pn);
    PAdicNumber::from_digits(p, v, &digits).expect("digits below p")
}

/// Random `(a, b)` within oracle range, reproducible from a fixed seed.
pub fn random_oracle_cases(count: usize, seed: u64) -> Vec<(PAdicNumber, PAdicNumber)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let pn = SWEEP_PRIMES[rng.gen_range(0..SWEEP_PRIMES.len())];
            let p = prime(pn);
            // p^(M+1) stays below ~2e6 for every prime in the sweep
            let deepest = if pn == 11 { -4 } else { -5 };
            let a = random_element(&mut rng, p, deepest, 1);
            let b = if rng.gen_ratio(1, 8) {
                PAdicNumber::zero(p)
            } else {
                random_element(&mut rng, p, deepest, 2)
            };
            (a, b)
        })
        .collect()
}

/// The oracle is unchanged when the enumeration depth grows by one.
pub fn check_oracle_stability() -> CheckOutcome {
    let mut t = Tally::default();
    for (a, b) in random_oracle_cases(M_STABILITY_CASES, M_STABILITY_SEED) {
        let m = oracle_depth(&a, &b);
        let v0 = oracle_sum(&a, &b, m, 0).expect("depth within cap");
        let v1 = oracle_sum(&a, &b, m + 1, 0).expect("depth within cap");
        t.record((v0 - v1).norm(), M_STABILITY_TOLERANCE);
    }
    t.finish(7, "oracle_depth_stability", M_STABILITY_TOLERANCE, true)
}

/// Runs checks 1-7 concurrently; results come back in id order.
pub fn run_numeric_checks() -> Vec<CheckOutcome> {
    let checks: [fn() -> CheckOutcome; 7] = [
        check_gauss_closed_form,
        check_reciprocity,
        check_poisson,
        check_asymptotics,
        check_padic_theorem,
        check_conjugation,
        check_oracle_stability,
    ];
    std::thread::scope(|s| {
        let handles: Vec<_> = checks.iter().map(|f| s.spawn(f)).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check thread panicked"))
            .collect()
    })
}
