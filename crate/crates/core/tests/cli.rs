use std::fs;
use std::process::{Command, Output};

use fstar_core::io::read_field_csv;
use fstar_core::phasespace::{fock_wigner, PhaseGrid};
use serde_json::Value;

fn fstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fstar")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn spectrum_identity() {
    let out = fstar(&["spectrum", "--spec", "identity", "--n-max", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "n,energy\n0,0.5\n1,1.5\n2,2.5\n3,3.5\n");
}

#[test]
fn spectrum_sqrt_n() {
    let out = fstar(&["spectrum", "--spec", "sqrt_n", "--n-max", "1"]);
    assert_eq!(stdout(&out), "n,energy\n0,0.5\n1,2.5\n");
}

#[test]
fn config_errors_exit_two_and_name_the_flag() {
    for (args, flag) in [
        (vec!["spectrum", "--spec", "qdef:q=abc", "--n-max", "2"], "--spec"),
        (vec!["spectrum"], "--n-max"),
        (vec!["residual", "--grid", "-1,1,-1,1,3,9", "--n", "0"], "--grid"),
        (vec!["residual", "--order", "third", "--n", "0"], "--order"),
        (vec!["wigner", "--grid", "-2,2,-2,2,9,9"], "--n"),
    ] {
        let out = fstar(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(flag), "{args:?}: {err}");
    }
}

#[test]
fn thread_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_fstar"))
        .args(["spectrum", "--n-max", "1"])
        .env("FSTAR_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FSTAR_THREADS"));
    let out = Command::new(env!("CARGO_BIN_EXE_fstar"))
        .args(["spectrum", "--n-max", "1"])
        .env("FSTAR_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn wigner_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w2.csv");
    let out = fstar(&["wigner", "--n", "2", "--grid", "-3,3,-3,3,17,21", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let field = read_field_csv(fs::File::open(&path).unwrap(), 1.0, "W_2").unwrap();
    let grid = PhaseGrid::new((-3.0, 3.0), (-3.0, 3.0), 17, 21, 1.0, 0.5).unwrap();
    assert_eq!(field.values(), fock_wigner(2, &grid).unwrap().values());
    let report: Value = serde_json::from_str(&fs::read_to_string(path.with_extension("json")).unwrap()).unwrap();
    assert_eq!(report["label"], "W_2");
    assert_eq!(report["grid"]["n_q"], 17);
}

#[test]
fn residual_report_schema() {
    let out = fstar(&["residual", "--n", "1", "--grid", "-6,6,-6,6,65,65"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let report: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = report.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["identity", "spec", "n", "hbar", "omega", "order", "max_abs", "l2", "imag_max", "witness", "grid", "energy", "phase_average"]
    );
    assert!(report["max_abs"].as_f64().unwrap() <= 1e-8);
    assert!(text.contains("\"energy\": 1.5000000000000000e+0"));
}

#[test]
fn commutator_writes_field_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("comm.csv");
    let out = fstar(&["commutator", "--spec", "sqrt_n", "--grid", "-3,3,-3,3,33,33", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(path.with_extension("json")).unwrap()).unwrap();
    assert!(report["reports"]["closed_form"]["max_abs"].as_f64().unwrap() <= 1e-8);
    assert!(report["reports"]["target"]["max_abs"].as_f64().unwrap() > 0.1);
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 33 * 33 + 1);
}

#[test]
fn assoc_csv_exact_zero_and_slope() {
    let out = fstar(&["assoc", "--spec", "identity", "--order", "exact", "--grid", "-2,2,-2,2,9,9"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().skip(1).all(|l| l.ends_with(",exact_zero")));
    let out = fstar(&["assoc", "--spec", "sqrt_n", "--grid", "-8,8,-8,8,129,129"]);
    let text = stdout(&out);
    let slope: f64 = text.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!(slope > 1.9, "{text}");
}
