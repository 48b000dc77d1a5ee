use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::process::{Command, Output};

use serde_json::Value;

fn sixtrig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sixtrig")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = sixtrig(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout));
    });
    (out.status.code().expect("exited"), v)
}

fn f64_at(v: &Value, ptr: &str) -> f64 {
    v.pointer(ptr).and_then(Value::as_f64).unwrap_or_else(|| panic!("missing {ptr} in {v}"))
}

#[test]
fn solve_minus_three() {
    let (code, v) = json(&["solve", "--target", "-3", "--k-range", "0..0"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "solve");
    assert_eq!(v["status"], "ok");
    let phi = f64_at(&v, "/result/roots/0/phi/radians");
    assert!((phi.cos() - (1.0 - 1.0 / SQRT_2)).abs() < 1e-12);
    let forms: Vec<&str> =
        v["result"]["residues"].as_array().unwrap().iter().map(|r| r["exact"].as_str().unwrap()).collect();
    assert_eq!(forms, ["pi/4 + phi1", "pi/4 - phi1 + 2pi"]);
    for r in v["result"]["residues"].as_array().unwrap() {
        let x = r["radians"].as_f64().unwrap();
        assert_eq!(r["decimal"].as_str().unwrap().parse::<f64>().unwrap(), x);
        assert!(
            ((x - FRAC_PI_4).abs() - phi).abs() < 1e-12
                || ((x - FRAC_PI_4 - 2.0 * std::f64::consts::PI).abs() - phi).abs() < 1e-12
        );
    }
    for s in v["result"]["solutions"].as_array().unwrap() {
        assert!(s["residual"].as_f64().unwrap().abs() <= 1e-9);
    }
}

#[test]
fn gap_targets_have_no_solution() {
    for t in ["0", "1.5", "6"] {
        let (code, v) = json(&["solve", "--target", t]);
        assert_eq!(code, 2, "{t}");
        assert_eq!(v["status"], "no_solution");
    }
}

#[test]
fn boundary_targets_as_expressions() {
    let (code, v) = json(&["solve", "--target", "2 + 3*sqrt(2)"]);
    assert_eq!(code, 0);
    let residues = v["result"]["residues"].as_array().unwrap();
    assert_eq!(residues.len(), 1);
    assert_eq!(residues[0]["exact"], "pi/4");
    let (code, _) = json(&["solve", "--target", "1-2sqrt2"]);
    assert_eq!(code, 0);
}

#[test]
fn integer_mode_rejects_fractions() {
    let (code, v) = json(&["solve", "--target", "1.5", "--integer-mode"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "error");
    assert!(v["error"].as_str().unwrap().contains("integer"));
    let (code, _) = json(&["solve", "--target", "7", "--integer-mode", "--k-range", "-3..3"]);
    assert_eq!(code, 0);
}

#[test]
fn unparsable_target_is_an_error() {
    let (code, v) = json(&["solve", "--target", "three"]);
    assert_eq!(code, 1);
    assert!(v.get("result").is_none());
}

#[test]
fn verify_minus_two_notes_errata() {
    let (code, v) = json(&["verify", "--target", "-2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["matched"], true);
    assert_eq!(v["result"]["quoted_family"]["matched"], false);
    let notes = v["result"]["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().contains("3pi/4")));
}

#[test]
fn verify_seven_and_gap() {
    let (code, v) = json(&["verify", "--target", "7", "--tol", "1e-8"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["matched"], true);
    let (code, v) = json(&["verify", "--target", "3"]);
    assert_eq!(code, 0, "both sides empty counts as verified");
    assert_eq!(v["result"]["matched"], true);
    assert!(v["result"]["residues"].as_array().unwrap().is_empty());
}

#[test]
fn scan_examples() {
    let (_, v) = json(&["scan", "--target", "6"]);
    assert!((f64_at(&v, "/result/report/min_gap") - 0.2426).abs() < 1e-4);
    let (_, v) = json(&["scan", "--target", "-2"]);
    assert!(f64_at(&v, "/result/report/min_gap") <= 1e-6);
    let (_, v) = json(&["scan", "--target", "0", "--points", "1000"]);
    assert!(f64_at(&v, "/result/report/min_gap") > 1.0);
    let (code, _) = json(&["scan", "--target", "0", "--points", "10"]);
    assert_eq!(code, 1);
}

#[test]
fn classify_examples() {
    let (code, v) = json(&["classify", "1", "1", "0", "-1.41421356", "1.41421356"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["both_roots_inside"], true);
    let (_, v) = json(&["classify", "1", "2", "-1", "-1.41421356", "1.41421356"]);
    assert_eq!(v["result"]["one_inside_one_outside"], true);
    assert_eq!(v["result"]["conditions"]["endpoint_product_sign"], -1);
    let (_, v) = json(&["classify", "1", "0", "1", "0", "1"]);
    assert_eq!(v["result"]["location"]["kind"], "no_real_roots");
    let (code, _) = json(&["classify", "0", "1", "1", "0", "1"]);
    assert_eq!(code, 1);
    let (code, _) = json(&["classify", "1", "1", "1", "2", "1"]);
    assert_eq!(code, 1);
}

#[test]
fn samples_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let p = path.to_str().unwrap();
    let (code, v) = json(&["samples", "--from", "0.1", "--to", "1.4", "--step", "0.1", "--out", p]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["rows"], 14);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x_radians,f_value"));
    for line in lines {
        let (x, f) = line.split_once(',').unwrap();
        assert!(x.parse::<f64>().unwrap().is_finite());
        assert!(f.parse::<f64>().unwrap().is_finite());
    }
}

#[test]
fn samples_unwritable_path() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("missing").join("f.csv");
    let (code, v) = json(&["samples", "--from", "0.1", "--to", "1", "--step", "0.1", "--out", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "error");
}

#[test]
fn motivating_demo() {
    let (code, v) = json(&["motivating"]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(r["closed_under_negation"], true);
    assert_eq!(r["all_verified"], true);
    assert_eq!(r["branches"].as_array().unwrap().len(), 4);
    let xs: Vec<f64> = r["solutions"].as_array().unwrap().iter().map(|s| s["x"]["radians"].as_f64().unwrap()).collect();
    let smallest = f64_at(&v, "/result/smallest_positive/radians");
    assert_eq!(Some(smallest), xs.iter().copied().filter(|x| *x > 0.0).reduce(f64::min));
}

#[test]
fn text_format() {
    let out = sixtrig(&["--format", "text", "solve", "--target", "-3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pi/4 + phi1"), "{text}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(sixtrig(&["bogus"]).status.code(), Some(1));
    assert_eq!(sixtrig(&["solve"]).status.code(), Some(1));
    assert_eq!(sixtrig(&["--help"]).status.code(), Some(0));
}
