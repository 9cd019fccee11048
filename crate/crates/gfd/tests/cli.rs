//! End-to-end checks of the command-line interface.

#![allow(clippy::excessive_precision)]

use std::process::{Command, Output};

fn gfd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn deriv_per_exponent_strategy_prints_caputo_value() {
    let out = gfd(&[
        "deriv", "--expr", "t^2", "--alpha", "0.5", "--strategy", "exponent", "--at", "1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    // Γ(3)/Γ(5/2) · 1^{3/2}
    let value: f64 = text
        .rsplit_once(':')
        .expect("value line")
        .1
        .trim()
        .parse()
        .expect("numeric value");
    assert!(
        (value - 1.5045055561273501).abs() <= 1e-12,
        "unexpected output: {text}"
    );
    assert!(text.contains("t^1.5"), "missing symbolic term list: {text}");
}

#[test]
fn deriv_fixed_strategy_requires_beta() {
    let out = gfd(&["deriv", "--expr", "t^2", "--alpha", "0.5", "--at", "1"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--beta"));
}

#[test]
fn deriv_rejects_malformed_expression() {
    let out = gfd(&[
        "deriv", "--expr", "t^", "--alpha", "0.5", "--beta", "1", "--at", "1",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("parse"));
}

#[test]
fn integrate_linear_monomial() {
    let out = gfd(&[
        "integrate", "--expr", "t", "--alpha", "0.5", "--beta", "0.5", "--to", "1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    // (1/Γ(1/2)) · t^{3/2}/(3/2) at t = 1.
    let value: f64 = text
        .rsplit_once('=')
        .expect("value line")
        .1
        .trim()
        .parse()
        .expect("numeric value");
    assert!((value - 0.37612638903183752).abs() <= 1e-9, "{text}");
}

#[test]
fn table_command_writes_csv_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table1.csv");
    let out = gfd(&["table", "--id", "1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("PASS"));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("t,method,reference,computed,abs_deviation\n"));
    assert!(csv.contains("0.2,Present,0.31439,"));
}

#[test]
fn table_exit_code_reflects_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table1_tight.csv");
    let out = gfd(&[
        "table",
        "--id",
        "1",
        "--tolerance",
        "1e-12",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn figure_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("fig2_a.csv");
    let b = dir.path().join("fig2_b.csv");
    for path in [&a, &b] {
        let out = gfd(&["figure", "--id", "2", "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
    let text = String::from_utf8(bytes_a).unwrap();
    assert!(text.starts_with("x,err_gfd,err_cd\n"));
    assert_eq!(text.lines().count(), 101);
}

#[test]
fn solve_numeric_riccati_produces_grid_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r1.csv");
    let out = gfd(&[
        "solve",
        "--problem",
        "riccati1",
        "--alpha",
        "0.75",
        "--grid",
        "50",
        "--method",
        "numeric",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 52, "header plus 51 samples");
    assert!(lines[1].starts_with("0.000000000000e0,"));
    let (last_x, last_y) = lines
        .last()
        .unwrap()
        .split_once(',')
        .map(|(x, y)| (x.parse::<f64>().unwrap(), y.parse::<f64>().unwrap()))
        .unwrap();
    assert!((last_x - 1.0).abs() < 1e-12);
    assert!((last_y - 0.79617090030507537).abs() <= 1e-6);
}

#[test]
fn solve_series_matches_closed_series() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ex1.csv");
    let out = gfd(&[
        "solve",
        "--problem",
        "example1",
        "--grid",
        "10",
        "--method",
        "series",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(&path).unwrap();
    let last = csv.lines().last().unwrap();
    let y: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!((y - 2.2906982523032382).abs() <= 1e-10);
}

#[test]
fn solve_rejects_mismatched_flags() {
    let out = gfd(&[
        "solve", "--problem", "example3", "--method", "closed", "--out", "/tmp/x.csv",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("Riccati"));

    let out = gfd(&[
        "solve", "--problem", "riccati1", "--alpha", "0.75", "--k", "2", "--method", "numeric",
        "--out", "/tmp/x.csv",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("example1"));
}

#[test]
fn verify_filter_runs_matching_checks() {
    let out = gfd(&["verify", "--filter", "table"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("3/3 checks passed"), "{text}");
    assert!(text.contains("table1_regression"));
}

#[test]
fn verify_rejects_unknown_filter() {
    let out = gfd(&["verify", "--filter", "no_such_check"]);
    assert!(!out.status.success());
}
