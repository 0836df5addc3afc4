//! The `varbic` binary: exit codes, output routing and byte-stable JSON.

use std::path::PathBuf;
use std::process::{Command, Output};

fn varbic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varbic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

#[test]
fn passing_suite_exits_zero() {
    let out = varbic(&["verify-mech"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS  mech.energy"));
    assert!(text.contains("summary: 9 passed, 0 failed"));
}

#[test]
fn engine_failure_exits_one() {
    let out = varbic(&["verify-gr", "--jet-cap", "1", "--format", "json", "--no-timings"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["entries"][0]["id"], "setup");
    assert_eq!(v["entries"][0]["status"], "fail");
    assert!(v["entries"][0]["note"].as_str().unwrap().contains("jet-order cap"));
}

#[test]
fn configuration_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["verify-gr", "--dim", "7"],
        &["verify-gr", "--dim", "4"],
        &["verify-gr", "--points", "0"],
        &["verify-gr", "--jobs", "0"],
        &["verify-gr", "--jet-cap", "0"],
        &["verify-linfty", "--k", "3"],
        &["verify-gr", "--field", "vec v [x1]"],
        &["verify-gr", "--field", "vec v [x1, 0.5]"],
        &["verify-mech", "--field", "q^1_{,1}"],
        &["verify-gr", "--format", "yaml"],
        &["verify-nothing"],
        &["verify-gr", "--bogus"],
    ];
    for args in cases {
        let out = varbic(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn field_program_from_file() {
    let dir = std::env::temp_dir().join(format!("varbic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fields.vb");
    std::fs::write(&path, "# two fields\nvec r [x2, -x1]\nvec b [x1^2, 1]\n").unwrap();
    let out = varbic(&["verify-covariance", "--field", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["fields"][0], "r = [x^2, -x^1]");
    assert!(v["entries"].as_array().unwrap().iter().any(|e| e["id"] == "cov.christoffel[b]"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("varbic-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = varbic(&["verify-mech", "--format", "json", "--no-timings", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

/// Set `VARBIC_BLESS=1` to rewrite the golden file after an intended
/// change to the report.
#[test]
fn json_report_is_byte_stable() {
    let args = ["verify-mech", "--format", "json", "--no-timings", "--seed", "11"];
    let one = varbic(&[&args[..], &["--jobs", "1"]].concat());
    let four = varbic(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout, "thread count changed the report");
    let path = golden("verify_mech.json");
    if std::env::var_os("VARBIC_BLESS").is_some() {
        std::fs::write(&path, &one.stdout).unwrap();
    }
    let expected = std::fs::read(&path).expect("golden file");
    assert_eq!(String::from_utf8(one.stdout).unwrap(), String::from_utf8(expected).unwrap());
}

#[test]
fn oracle_fields_are_reported() {
    let out = varbic(&["verify-divergence", "--format", "json", "--no-timings", "--points", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let second = &v["entries"][1];
    assert_eq!(second["id"], "div.second");
    assert_eq!(second["oracle"]["points"], 3);
    assert_eq!(second["oracle"]["oracle_zero"], true);
    assert_eq!(second["printed"]["agrees"], false);
    assert_eq!(v["summary"]["printed_discrepancies"], 1);
    assert!(v.get("wall_ms").is_none());
}
