//! wasm-bindgen exports for the static demo page in `www/`.
//!
//! Every export returns a JSON string; errors come back as `{"error": "..."}`
//! so the page never has to catch a thrown value.

use gaussum::exact_arith::is_prime;
use gaussum::gauss_sums::{gauss_sum_closed, gauss_sum_direct};
use gaussum::padic::parse_padic;
use gaussum::padic_integral::{brute_force_integral, closed_form_integral, oracle_depth};
use gaussum::regularized::{regularized_gauss_sum, RegularizationParams};
use gaussum::summation::root_of_unity;
use gaussum::{Error, ValidatedPrime};
use num_complex::Complex64;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Longest walk the page will draw.
pub const MAX_WALK: u64 = 20_000;
/// Smallest epsilon the sweep accepts, kept low enough for a browser tab.
pub const MIN_SWEEP_EPS: f64 = 1e-8;

type Point = [f64; 2];

fn point(z: Complex64) -> Point {
    [z.re, z.im]
}

#[derive(Serialize)]
struct Closed {
    value: Point,
    form: String,
}

#[derive(Serialize)]
struct Walk {
    n: u64,
    q: i64,
    points: Vec<Point>,
    total: Point,
    closed: Option<Closed>,
}

#[derive(Serialize)]
struct SweepRow {
    epsilon: f64,
    radius: u64,
    value: Point,
    scaled: Point,
    predicted_coefficient: Point,
    remainder_abs: f64,
}

#[derive(Serialize)]
struct Integral {
    p: u64,
    a: String,
    b: String,
    case: &'static str,
    closed: Point,
    lambda: Point,
    norm_factor: f64,
    phase: Point,
    gate: u8,
    oracle: Option<Point>,
    oracle_depth: u32,
    error: Option<f64>,
}

fn to_json<T: Serialize>(result: Result<T, Error>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e.to_string()),
    }
}

fn error_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

fn walk(n: u64, q: i64) -> Result<Walk, Error> {
    if n == 0 || n > MAX_WALK {
        return Err(Error::Invalid(format!("n must be in 1..={MAX_WALK}")));
    }
    let qr = q.rem_euclid(n as i64) as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut points = Vec::with_capacity(n as usize + 1);
    points.push(point(acc));
    for k in 0..n {
        let sq = (u128::from(k) * u128::from(k) % u128::from(n)) as u64;
        let r = (u128::from(qr) * u128::from(sq) % u128::from(n)) as u64;
        acc += root_of_unity(r, n);
        points.push(point(acc));
    }
    let closed = if n > 2 && is_prime(n)? {
        gauss_sum_closed(ValidatedPrime::new(n)?, q).ok().map(|g| Closed {
            value: point(g.numeric),
            form: g.exact_form.map(|f| f.to_string()).unwrap_or_default(),
        })
    } else {
        None
    };
    Ok(Walk {
        n,
        q,
        points,
        total: point(gauss_sum_direct(n, q)),
        closed,
    })
}

fn sweep(p: u64, q: i64, lo: f64, hi: f64, per_decade: u32) -> Result<Vec<SweepRow>, Error> {
    let p = ValidatedPrime::new(p)?;
    if !(lo >= MIN_SWEEP_EPS.log10() && hi <= 0.0 && lo < hi) {
        return Err(Error::Invalid(format!(
            "need {} <= lo < hi <= 0",
            MIN_SWEEP_EPS.log10()
        )));
    }
    let per_decade = per_decade.clamp(1, 20);
    let steps = ((hi - lo) * f64::from(per_decade)).round().max(1.0) as u32;
    (0..=steps)
        .map(|i| {
            let e = hi - (hi - lo) * f64::from(i) / f64::from(steps);
            let params = RegularizationParams::auto(10f64.powf(e))?;
            let r = regularized_gauss_sum(p, q, &params)?;
            let root = r.epsilon.sqrt();
            Ok(SweepRow {
                epsilon: r.epsilon,
                radius: r.truncation_radius,
                value: point(r.value),
                scaled: point(r.value * root),
                predicted_coefficient: point(r.predicted_leading * root),
                remainder_abs: r.remainder.norm(),
            })
        })
        .collect()
}

fn integral(p: u64, a: &str, b: &str, precision: usize) -> Result<Integral, Error> {
    let prime = ValidatedPrime::new(p)?;
    let a = parse_padic(a, prime, precision)?;
    let b = parse_padic(b, prime, precision)?;
    let closed = closed_form_integral(&a, &b)?;
    let oracle = brute_force_integral(&a, &b).ok();
    let c = closed.components;
    Ok(Integral {
        p,
        a: a.to_string(),
        b: b.to_string(),
        case: closed.case_tag.as_str(),
        closed: point(closed.value),
        lambda: point(c.lambda),
        norm_factor: c.norm_factor,
        phase: point(c.phase),
        gate: c.gate,
        oracle: oracle.map(point),
        oracle_depth: oracle_depth(&a, &b),
        error: oracle.map(|o| (o - closed.value).norm()),
    })
}

/// Partial sums of `exp(2 pi i q k^2 / n)` for `k = 0..n`, plus the closed form
/// when `n` is an odd prime.
#[wasm_bindgen]
pub fn gauss_walk(n: u32, q: i32) -> String {
    to_json(walk(u64::from(n), i64::from(q)))
}

/// Regularized sums over `eps = 10^lo .. 10^hi`, largest first.
#[wasm_bindgen]
pub fn eps_sweep(p: u32, q: i32, lo: f64, hi: f64, per_decade: u32) -> String {
    to_json(sweep(u64::from(p), i64::from(q), lo, hi, per_decade))
}

/// Closed-form p-adic Gauss integral next to the finite oracle.
#[wasm_bindgen]
pub fn padic_integral(p: u32, a: &str, b: &str, precision: u32) -> String {
    to_json(integral(u64::from(p), a, b, precision as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn walk_ends_at_closed_form() {
        let v = parse(&gauss_walk(7, 1));
        let pts = v["points"].as_array().unwrap();
        assert_eq!(pts.len(), 8);
        let last = &pts[7];
        let closed = &v["closed"]["value"];
        assert!((last[0].as_f64().unwrap() - closed[0].as_f64().unwrap()).abs() < 1e-9);
        assert!((last[1].as_f64().unwrap() - 7f64.sqrt()).abs() < 1e-9);
        assert_eq!(v["closed"]["form"], "+i*sqrt(7)");
    }

    #[test]
    fn composite_walk_has_no_closed_form() {
        let v = parse(&gauss_walk(12, 1));
        assert!(v["closed"].is_null());
        assert_eq!(v["points"].as_array().unwrap().len(), 13);
    }

    #[test]
    fn walk_rejects_bad_length() {
        assert!(parse(&gauss_walk(0, 1))["error"].is_string());
        assert!(parse(&gauss_walk(MAX_WALK as u32 + 1, 1))["error"].is_string());
    }

    #[test]
    fn sweep_scaled_value_approaches_coefficient() {
        let v = parse(&eps_sweep(5, 1, -6.0, -2.0, 1));
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 5);
        let last = rows.last().unwrap();
        assert!((last["epsilon"].as_f64().unwrap() - 1e-6).abs() < 1e-18);
        let s = &last["scaled"];
        let c = &last["predicted_coefficient"];
        // sqrt(5) sqrt(pi) / 5
        assert!((c[0].as_f64().unwrap() - (std::f64::consts::PI / 5.0).sqrt()).abs() < 1e-12);
        assert!((s[0].as_f64().unwrap() - c[0].as_f64().unwrap()).abs() < 1e-6);
    }

    #[test]
    fn sweep_rejects_bad_range() {
        assert!(parse(&eps_sweep(5, 1, -2.0, -6.0, 1))["error"].is_string());
        assert!(parse(&eps_sweep(5, 1, -12.0, -2.0, 1))["error"].is_string());
        assert!(parse(&eps_sweep(4, 1, -4.0, -2.0, 1))["error"].is_string());
    }

    #[test]
    fn integral_matches_oracle() {
        let v = parse(&padic_integral(5, "1/25", "1", 16));
        assert_eq!(v["case"], "quadratic");
        assert!(v["error"].as_f64().unwrap() < 1e-9);
        assert!((v["norm_factor"].as_f64().unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn integral_small_a_and_zero_cases() {
        let v = parse(&padic_integral(3, "2", "1/3", 16));
        assert_eq!(v["case"], "small_a");
        assert_eq!(v["gate"], 0);
        let v = parse(&padic_integral(3, "1/9", "1/81", 16));
        assert_eq!(v["case"], "zero_by_oscillation");
        assert!(v["error"].as_f64().unwrap() < 1e-9);
        let v = parse(&padic_integral(3, "2", "1", 16));
        assert_eq!(v["case"], "small_a");
        assert_eq!(v["closed"][0], 1.0);
    }

    #[test]
    fn integral_reports_parse_errors() {
        assert!(parse(&padic_integral(5, "x", "1", 16))["error"].is_string());
        assert!(parse(&padic_integral(6, "1", "1", 16))["error"].is_string());
    }
}
