use std::path::Path;
use std::process::{Command, Output};

use shiftker_core::{IdentityReport, Status};

fn shiftker(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftker"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn verify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = shiftker(&["verify", "--suite", "gamma", "--output", path_str(p)]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn json_round_trips_through_report() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let out = shiftker(&["verify", "--suite", "macdonald-whittaker", "--output", path_str(&first)]);
    assert_eq!(code(&out), 0);
    let out = shiftker(&["report", "--input", path_str(&first), "--output", path_str(&second)]);
    assert_eq!(code(&out), 0);
    let a = std::fs::read_to_string(&first).unwrap();
    let b = std::fs::read_to_string(&second).unwrap();
    assert_eq!(a, b);
    let reports: Vec<IdentityReport> = serde_json::from_str(&a).unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r.status == Status::Match));
}

#[test]
fn csv_is_sorted_by_id_then_params() {
    let out = shiftker(&[
        "grid",
        "--identity",
        "kernel-closed-form",
        "--param",
        "u=0.5:2.5:0.5",
        "--set",
        "n=2",
        "--set",
        "k0=0",
        "--set",
        "sigma=0.3i",
        "--set",
        "sigma_hat=0",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let headers = rows.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        [
            "identity_id",
            "params",
            "lhs_re",
            "lhs_im",
            "rhs_re",
            "rhs_im",
            "abs_diff",
            "rel_diff",
            "ratio_re",
            "ratio_im",
            "status",
            "notes"
        ]
    );
    let us: Vec<f64> = rows
        .records()
        .map(|r| {
            let r = r.unwrap();
            assert_eq!(&r[0], "kernel-closed-form");
            assert_eq!(&r[10], "match");
            let u = r[1].split(';').find_map(|kv| kv.strip_prefix("u=")).unwrap();
            u.parse().unwrap()
        })
        .collect();
    assert_eq!(us, [0.5, 1.0, 1.5, 2.0, 2.5]);
}

#[test]
fn plotdata_has_five_numeric_columns() {
    let out = shiftker(&["verify", "--suite", "hankel", "--format", "plotdata"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with('#'));
    let mut rows = 0;
    for line in text.lines().filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let cols: Vec<f64> = line.split_whitespace().map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 5, "{line}");
        rows += 1;
    }
    assert!(rows > 0);
}

#[test]
fn failing_suite_exits_one() {
    // the doubled-coefficient form of the parabolic cylinder sum diverges
    let out = shiftker(&["verify", "--suite", "parabolic-cylinder"]);
    assert_eq!(code(&out), 1);
    let reports: Vec<IdentityReport> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(reports.iter().any(|r| !r.status.is_ok()));
    assert!(reports
        .iter()
        .filter(|r| r.identity_id == "parabolic-cylinder-sum-rescaled")
        .all(|r| r.status == Status::Match));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&shiftker(&[])), 2);
    assert_eq!(code(&shiftker(&["verify", "--suite", "no-such-suite"])), 2);
    assert_eq!(code(&shiftker(&["eval", "--fn", "besselk", "--x", "1"])), 2);
    assert_eq!(
        code(&shiftker(&["eval", "--fn", "besselk", "--nu", "1+2j", "--x", "1"])),
        2
    );
    assert_eq!(code(&shiftker(&["grid", "--identity", "no-such-identity"])), 2);
    assert_eq!(
        code(&shiftker(&[
            "grid",
            "--identity",
            "kernel-closed-form",
            "--param",
            "u=1:2:1"
        ])),
        2
    );
    assert_eq!(
        code(&shiftker(&[
            "kernel",
            "--u",
            "-1",
            "--n",
            "2",
            "--sigma",
            "0",
            "--sigma-hat",
            "0"
        ])),
        2
    );
}

#[test]
fn unwritable_output_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("absent").join("out.json");
    let out = shiftker(&["verify", "--suite", "gamma", "--output", path_str(&target)]);
    assert_eq!(code(&out), 1);
    assert!(!target.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn eval_besselk_half_order() {
    // K_{1/2}(x) = sqrt(pi / 2x) e^{-x}
    let out = shiftker(&["eval", "--fn", "besselk", "--nu", "0.5", "--x", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let re = v["value"][0].as_f64().unwrap();
    let exact = (std::f64::consts::PI / 4.0).sqrt() * (-2.0f64).exp();
    assert!((re - exact).abs() < 1e-14 * exact, "{re} vs {exact}");
    assert_eq!(v["value"][1].as_f64().unwrap(), 0.0);
    assert!(v["error_estimate"].as_f64().unwrap() < 1e-13);
}

#[test]
fn eval_accepts_complex_arguments() {
    let out = shiftker(&["eval", "--fn", "lngamma", "--x", "1-i"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    // conjugate of lnGamma(1+i) = -0.6509231993 - 0.3016403205i
    assert!((v["value"][0].as_f64().unwrap() + 0.6509231993018563).abs() < 1e-12);
    assert!((v["value"][1].as_f64().unwrap() - 0.3016403204675331).abs() < 1e-12);
    assert!(v["error_estimate"].is_null());
}

#[test]
fn kernel_methods_agree_with_unit_ratios() {
    let out = shiftker(&[
        "kernel",
        "--u",
        "1",
        "--n",
        "2",
        "--sigma",
        "0",
        "--sigma-hat",
        "0",
        "--method",
        "all",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let values = v["values"].as_array().unwrap();
    assert_eq!(values.len(), 4);
    for e in values {
        assert!(
            (e["value"][1].as_f64().unwrap() + 0.05854983152431917).abs() < 1e-12,
            "{e}"
        );
    }
    let ratios = v["ratios"].as_array().unwrap();
    assert_eq!(ratios.len(), 6);
    for r in ratios {
        assert!((r["ratio"][0].as_f64().unwrap() - 1.0).abs() < 1e-10, "{r}");
    }
}
