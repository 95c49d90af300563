use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn taumod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taumod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

const CURVE: &str = r#"{
  "branch_points": [[-1.2, 0.3], [-0.4, -0.9], [0.5, -0.6], [1.3, 0.2], [0.6, 1.1], [-0.5, 1.0]],
  "c0": [0.3, -0.2],
  "c1": [1.0, 0.4]
}"#;

fn write_curve(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn origami_h2_degree_three() {
    let out = taumod(&["origami", "--degree", "3", "--stratum", "2"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["schema"], "taumod.origami/1");
    assert_eq!(v["origamis"], 3);
    assert_eq!(v["orbits"].as_array().unwrap().len(), 1);
    let row = &v["rows"][0];
    assert_eq!(row["origami"]["d"], 3);
    assert!(row["origami"]["h"].is_array() && row["origami"]["v"].is_array());
}

#[test]
fn origami_trivial_cover() {
    let out = taumod(&[
        "origami",
        "--degree",
        "1",
        "--stratum",
        "",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2, "{text}");
    assert!(lines[0].starts_with("stratum,d,orbit_id"));
    assert!(lines[1].starts_with("H(),1,0,0,0,"));
}

#[test]
fn origami_invalid_input_exits_two() {
    for args in [
        &["origami", "--degree", "3", "--stratum", "3"][..],
        &["origami", "--degree", "2", "--stratum", "2"],
        &["origami", "--degree", "0", "--stratum", ""],
        &["origami", "--degree", "3", "--stratum", "x"],
        &["origami", "--stratum", "2"],
    ] {
        let out = taumod(args);
        assert_eq!(code(&out), 2, "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(!err.trim().is_empty());
    }
}

fn lyap_rows(args: &[&str]) -> Vec<Value> {
    let out = taumod(args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["schema"], "taumod.lyapunov/1");
    let rows = v["rows"].as_array().unwrap().clone();
    for r in &rows {
        for key in ["stratum", "d", "orbit_id", "K"] {
            assert!(!r[key].is_null(), "row lacks {key}: {r}");
        }
    }
    rows
}

#[test]
fn lyapunov_h11_constant() {
    let rows = lyap_rows(&["lyapunov", "--stratum", "1,1", "--dmax", "6"]);
    assert!(rows.len() >= 3);
    for r in &rows {
        assert_eq!(r["lyap_sum"], "3/2");
        assert_eq!(r["boundary_lyap_sum"], "3/2");
        assert_eq!(r["boundary_vanishing"], true);
        assert_eq!(r["K"], "12/1");
    }
}

#[test]
fn lyapunov_torus_rows_are_one() {
    let rows = lyap_rows(&["lyapunov", "--stratum", "", "--dmax", "3"]);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["lyap_sum"] == "1/1"));
}

#[test]
fn lyapunov_h2_single_row() {
    let rows = lyap_rows(&["lyapunov", "--stratum", "2", "--dmax", "3"]);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["lyap_sum"], "4/3");
}

#[test]
fn lyapunov_calibration_is_logged_in_rows() {
    let rows = lyap_rows(&[
        "lyapunov",
        "--stratum",
        "1,1",
        "--dmax",
        "4",
        "--calibration-k",
        "6/1",
    ]);
    assert!(rows.iter().all(|r| r["K"] == "6/1"));
    let out = taumod(&[
        "lyapunov",
        "--stratum",
        "1,1",
        "--dmax",
        "4",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let header = text.lines().next().unwrap();
    for key in ["stratum", "d", "orbit_id", "K"] {
        assert!(header.split(',').any(|h| h == key), "{header}");
    }
}

#[test]
fn lyapunov_bad_arguments_exit_two() {
    assert_eq!(
        code(&taumod(&["lyapunov", "--stratum", "1,1", "--dmax", "3"])),
        2
    );
    assert_eq!(
        code(&taumod(&[
            "lyapunov",
            "--stratum",
            "1,1",
            "--dmax",
            "5",
            "--calibration-k",
            "0"
        ])),
        2
    );
    assert_eq!(
        code(&taumod(&[
            "lyapunov",
            "--stratum",
            "1,1",
            "--dmax",
            "5",
            "--calibration-k",
            "a/b"
        ])),
        2
    );
}

#[test]
fn picard_genus_two() {
    let out = taumod(&["picard", "--genus", "2"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    let c = &v["lambda"]["coefficients"];
    assert_eq!(c["psi"], "1/4");
    assert_eq!(c["delta_deg"], "1/24");
    assert_eq!(c["delta_0"], "1/12");
    assert_eq!(c["delta_1"], "1/8");
    assert_eq!(
        v["tau_relation"],
        "24*lambda - 6*psi - delta_deg - 2*delta_0 - 3*delta_1 = 0"
    );
}

#[test]
fn picard_verify_and_range() {
    let out = taumod(&["picard", "--genus", "2", "--verify"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["verify"]["schema"], "taumod.checks/1");
    assert_eq!(v["verify"]["passed"], true);
    assert_eq!(code(&taumod(&["picard", "--genus", "1"])), 2);
    assert_eq!(code(&taumod(&["picard", "--genus", "0", "--verify"])), 2);
}

#[test]
fn tau_genus1_all_checks() {
    let out = taumod(&["tau", "genus1", "--all-checks"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["schema"], "taumod.checks/1");
    for c in v["checks"].as_array().unwrap() {
        for key in [
            "check",
            "inputs",
            "expected",
            "observed",
            "residual",
            "convention",
        ] {
            assert!(c.get(key).is_some(), "{key} missing in {c}");
        }
        assert!(c["residual"].as_f64().unwrap() < 1e-9, "{c}");
    }
}

#[test]
fn tau_genus1_group_selection() {
    let out = taumod(&["tau", "genus1", "--checks", "cusp"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["lemma7-cusp-exponent", "remark1-cusp-constant"]);
    assert_eq!(code(&taumod(&["tau", "genus1", "--checks", "nope"])), 2);
    assert_eq!(
        code(&taumod(&[
            "tau",
            "genus1",
            "--checks",
            "cusp",
            "--all-checks"
        ])),
        2
    );
}

#[test]
fn tau_genus2_invariance_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let curve = write_curve(dir.path(), "curve.json", CURVE);
    let out = taumod(&["tau", "genus2", "--curve", &curve, "--checks", "invariance"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"lemma2-homogeneity"));
    assert!(names.contains(&"theorem1-basepoint"));
}

#[test]
fn tau_genus2_bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("garbage.json", "not json"),
        (
            "short.json",
            r#"{"branch_points": [[0,0],[1,0]], "c0": [1,0], "c1": [0,1]}"#,
        ),
        (
            "missing.json",
            r#"{"branch_points": [[0,0],[1,0],[2,0],[3,0],[4,0],[5,0]], "c0": [1,0]}"#,
        ),
        (
            "repeated.json",
            r#"{"branch_points": [[0,0],[0,0],[2,0],[3,0],[4,0],[5,0]], "c0": [1,0], "c1": [0,1]}"#,
        ),
        (
            "unknown.json",
            r#"{"branch_points": [[0,0],[1,0],[2,0],[3,0],[4,0],[5,0]], "c0": [1,0], "c1": [0,1], "x": 1}"#,
        ),
        // zero of the differential on a branch point
        (
            "degenerate.json",
            r#"{"branch_points": [[0,0],[1,0],[2,0],[3,0],[4,0],[5,0]], "c0": [-1,0], "c1": [1,0]}"#,
        ),
    ];
    for (name, text) in cases {
        let p = write_curve(dir.path(), name, text);
        let out = taumod(&["tau", "genus2", "--curve", &p, "--checks", "invariance"]);
        assert_eq!(
            code(&out),
            2,
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let out = taumod(&["tau", "genus2", "--curve", "/nonexistent/curve.json"]);
    assert_eq!(code(&out), 2);
    let p = write_curve(dir.path(), "ok.json", CURVE);
    assert_eq!(
        code(&taumod(&[
            "tau", "genus2", "--curve", &p, "--checks", "bogus"
        ])),
        2
    );
}

#[test]
fn tau_genus2_check_failure_exits_three_and_writes_report() {
    // zero 2e-4 away from a branch point: the Euler derivative along the
    // path cannot be resolved there and the check reports a failure
    let dir = tempfile::tempdir().unwrap();
    let near = r#"{"branch_points": [[-1.2, 0.3], [-0.4, -0.9], [0.5, -0.6], [1.3, 0.2], [0.6, 1.1], [-0.5, 1.0]],
                   "c0": [1.1998, -0.3], "c1": [1.0, 0.0]}"#;
    let curve = write_curve(dir.path(), "near.json", near);
    let report = dir.path().join("report.json");
    let out = taumod(&[
        "tau",
        "genus2",
        "--curve",
        &curve,
        "--checks",
        "invariance",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["passed"], false);
    let failed: Vec<&Value> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .collect();
    assert!(!failed.is_empty());
    // the checks that could be evaluated are still reported
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["check"] == "theorem1-basepoint" && c["passed"] == true));
}

#[test]
fn out_flag_and_formats() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.csv");
    let out = taumod(&[
        "picard",
        "--genus",
        "4",
        "--format",
        "csv",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&p).unwrap();
    assert!(text.starts_with("genus,symbol,lambda_coefficient,tau_divisor_coefficient"));
    assert!(text.contains("4,delta_2,1/8,-3/1"));
    assert_eq!(
        code(&taumod(&["picard", "--genus", "2", "--format", "xml"])),
        2
    );
}

#[test]
fn reports_independent_of_jobs() {
    for args in [
        &["lyapunov", "--stratum", "1,1", "--dmax", "6"][..],
        &["origami", "--degree", "5", "--stratum", "1,1"],
        &[
            "tau",
            "genus2",
            "--corpus",
            "3",
            "--checks",
            "periods,invariance",
        ],
    ] {
        let mut outputs = Vec::new();
        for jobs in ["1", "4"] {
            let mut a = args.to_vec();
            a.extend_from_slice(&["--jobs", jobs]);
            let out = taumod(&a);
            assert_eq!(code(&out), 0, "{a:?}");
            outputs.push(out.stdout);
        }
        assert_eq!(outputs[0], outputs[1], "{args:?}");
    }
    assert_eq!(code(&taumod(&["picard", "--genus", "2", "--jobs", "0"])), 2);
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&taumod(&["--help"])), 0);
    assert_eq!(code(&taumod(&[])), 2);
}
