use std::path::PathBuf;
use std::process::Command;

use akhiezer::cli::{run, LadderResponse, SolveResponse};
use serde_json::Value;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_akhiezer"))
}

fn golden(name: &str) -> Value {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Same keys everywhere; numbers equal up to a small relative tolerance.
fn assert_matches(path: &str, got: &Value, want: &Value) {
    match (got, want) {
        (Value::Object(g), Value::Object(w)) => {
            let gk: Vec<_> = g.keys().collect();
            let wk: Vec<_> = w.keys().collect();
            assert_eq!(gk, wk, "keys at {path}");
            for (k, v) in w {
                assert_matches(&format!("{path}.{k}"), &g[k], v);
            }
        }
        (Value::Array(g), Value::Array(w)) => {
            assert_eq!(g.len(), w.len(), "length at {path}");
            for (i, (a, b)) in g.iter().zip(w).enumerate() {
                assert_matches(&format!("{path}[{i}]"), a, b);
            }
        }
        (Value::Number(g), Value::Number(w)) => {
            let (a, b) = (g.as_f64().unwrap(), w.as_f64().unwrap());
            assert!((a - b).abs() <= 1e-6 * a.abs().max(b.abs()) + 1e-12, "{path}: {a} vs {b}");
        }
        _ => assert_eq!(got, want, "at {path}"),
    }
}

fn json_of(args: &[&str]) -> Value {
    let out = run(args.iter().copied());
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn solve_schema_matches_golden() {
    let got = json_of(&["akhiezer", "solve", "--alpha", "-0.3", "--beta", "0.4", "--degree", "5", "--format", "json"]);
    assert_matches("$", &got, &golden("solve_odd.json"));
    assert!(got["diagnostics"]["pell_excess"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn degenerate_solve_reports_family() {
    let got = json_of(&["akhiezer", "solve", "--alpha", "-0.5", "--beta", "0.5", "--degree", "3"]);
    assert_matches("$", &got, &golden("solve_degenerate.json"));
    assert_eq!(got["case"]["branch"], "degenerate");
    assert!(got["degenerate_family"]["gamma"].as_f64().unwrap().abs() <= 1e-12);
}

#[test]
fn ladder_schema_matches_golden() {
    let got = json_of(&["akhiezer", "ladder", "--alpha", "-0.3", "--m", "2"]);
    assert_matches("$", &got, &golden("ladder.json"));
}

#[test]
fn certify_schema_matches_golden() {
    let got = json_of(&["akhiezer", "certify", "--alpha", "-0.3", "--beta", "0.4", "--degree", "4"]);
    assert_matches("$", &got, &golden("certify_even.json"));
    assert_eq!(got["passed"], true);
}

#[test]
fn ladder_rungs_decrease_and_bands_alternate() {
    let out = run(["akhiezer", "ladder", "--alpha", "0.1", "--m", "5"]);
    let ladder: LadderResponse = serde_json::from_str(&out.stdout).unwrap();
    for w in ladder.rungs.windows(2) {
        assert!(w[1].beta.0 < w[0].beta.0);
    }
    for w in ladder.bands.windows(2) {
        assert_ne!(w[0].branch, w[1].branch);
    }
}

#[test]
fn json_round_trips_losslessly() {
    let out = run(["akhiezer", "solve", "--alpha", "-0.3", "--beta", "0.4", "--degree", "7"]);
    let parsed: SolveResponse = serde_json::from_str(&out.stdout).unwrap();
    let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
    assert_eq!(again, out.stdout);
    let direct = akhiezer::synthesis::solve(akhiezer::frame::TwoIntervalSet::new(-0.3, 0.4).unwrap(), 7).unwrap();
    for (a, b) in parsed.coefficients.iter().zip(direct.f.descending()) {
        assert_eq!(a.0.to_bits(), b.to_bits());
    }
}

#[test]
fn identical_requests_give_identical_bytes() {
    let args = ["solve", "--alpha", "0.2", "--beta", "0.7", "--degree", "6", "--with-oracle"];
    let a = binary().args(args).output().unwrap();
    let b = binary().args(args).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn invalid_set_exits_2_with_empty_stdout() {
    let out = binary().args(["solve", "--alpha", "-0.3", "--beta", "-0.9", "--degree", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["class"], "validation");
}

#[test]
fn bad_flags_exit_2() {
    for args in [
        vec!["solve", "--alpha", "-0.3", "--beta", "0.4", "--degree", "0"],
        vec!["solve", "--alpha", "-0.3", "--beta", "0.4"],
        vec!["certify", "--alpha", "-0.3", "--beta", "0.4", "--degree", "3", "--grid", "100"],
        vec!["certify", "--alpha", "-0.3", "--beta", "0.4", "--degree", "13"],
        vec!["solve", "--alpha", "-0.3", "--beta", "0.4", "--degree", "3", "--tol-pell", "-1"],
        vec!["ladder", "--alpha", "1.5", "--m", "2"],
    ] {
        let out = binary().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn impossible_pell_tolerance_exits_3() {
    let out = binary()
        .args(["solve", "--alpha", "-0.3", "--beta", "0.4", "--degree", "5", "--tol-pell", "1e-300"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["class"], "numerical");
}

#[test]
fn certification_failure_exits_4_with_both_polynomials() {
    let out = binary()
        .args(["certify", "--alpha", "-0.3", "--beta", "0.4", "--degree", "3", "--tol-cert", "1e-15"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["class"], "certification");
    assert!(err["error"]["analytic"].is_string() && err["error"]["oracle"].is_string());
}

#[test]
fn certify_sweep_passes() {
    for (alpha, beta) in [(-0.3, 0.4), (-0.6, 0.1), (0.2, 0.7), (-0.8, -0.5), (-0.1, 0.9)] {
        for degree in 3..=7 {
            let (a, b, n) = (alpha.to_string(), beta.to_string(), degree.to_string());
            let out = run(["akhiezer", "certify", "--alpha", &a, "--beta", &b, "--degree", &n]);
            assert_eq!(out.code, 0, "({alpha}, {beta}) n={degree}: {}", out.stderr);
        }
    }
}

#[test]
fn csv_has_coefficients_and_zeros_only() {
    let out = run(["akhiezer", "solve", "--alpha", "-0.3", "--beta", "0.4", "--degree", "4", "--format", "csv"]);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "kind,index,value");
    assert_eq!(lines.len(), 1 + 5 + 4);
    assert!(lines[1..].iter().all(|l| l.starts_with("coefficient,") || l.starts_with("zero,")));
}

#[test]
fn logs_go_to_stderr_only() {
    let out = binary()
        .env("AKHIEZER_LOG", "debug")
        .args(["solve", "--alpha", "-0.3", "--beta", "0.4", "--degree", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let plain = binary().args(["solve", "--alpha", "-0.3", "--beta", "0.4", "--degree", "3"]).output().unwrap();
    assert_eq!(out.stdout, plain.stdout);
    assert!(!out.stderr.is_empty());
}
