use std::process::{Command, Output};

fn gaussum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaussum"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn json_on_stdout_only() {
    let out = gaussum(&["gauss-sum", "--p", "7", "--q", "3", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stderr.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["op_name"], "gauss-sum");
    assert_eq!(v["exact_form"], "-i*sqrt(7)");
    assert_eq!(v["verified"], true);
}

#[test]
fn usage_errors_exit_two_on_stderr() {
    let out = gaussum(&["gauss-sum", "--p", "5", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bogus"));

    let out = gaussum(&["padic-integral", "--p", "5", "--a", "1/0", "--b", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn sweep_csv_parses_as_rfc4180() {
    let out = gaussum(&[
        "eps-sweep", "--p", "13", "--q", "2", "--eps-decades", "-7:-3", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["epsilon", "value_re", "value_im", "predicted_re", "predicted_im", "remainder_abs"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    for row in &rows {
        let eps: f64 = row[0].parse().unwrap();
        let value_re: f64 = row[1].parse().unwrap();
        let predicted_re: f64 = row[3].parse().unwrap();
        // (2/13) = -1 so the sum is negative and grows like eps^{-1/2}
        assert!(value_re < 0.0);
        assert!((value_re - predicted_re).abs() < 1e-6 * predicted_re.abs());
        assert!((predicted_re * eps.sqrt() + 13f64.sqrt() * std::f64::consts::PI.sqrt() / 13.0).abs() < 1e-12);
    }
}

#[test]
fn failed_verification_exits_three() {
    // a radius of 3 leaves most of the Gaussian mass out of the direct sum
    let out = gaussum(&["reg-sum", "--p", "5", "--q", "1", "--eps", "0.0001", "--truncation", "3", "--verify"]);
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verified"], false);
}
