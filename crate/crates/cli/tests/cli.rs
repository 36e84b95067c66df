use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const TS: &str = "2024-01-01T00:00:00Z";

fn fixture(rel: &str) -> String {
    let p: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel);
    p.to_str().unwrap().to_string()
}

fn qai(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qai")).args(args).env_remove("QAI_TIMESTAMP").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fail_under_on_broken_fixture() {
    let o = qai(&["scan", &fixture("aer-mini"), "--fail-under", "60", "--timestamp", TS]);
    assert_eq!(o.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["targets"][0]["score"]["grade"], "Broken");

    let o = qai(&["scan", &fixture("corpus/hard-guard"), "--fail-under", "100", "--timestamp", TS]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qai(&["scan", "/nonexistent/qai-root"]).status.code(), Some(2));
    assert_eq!(qai(&["scan"]).status.code(), Some(2));
    assert_eq!(qai(&["scan", &fixture("aer-mini"), "--fail-under", "101"]).status.code(), Some(2));
    assert_eq!(qai(&["scan", &fixture("aer-mini"), "--format", "html"]).status.code(), Some(2));
    assert_eq!(qai(&["frobnicate"]).status.code(), Some(2));
    let o = qai(&["vendor", &fixture("aer-mini"), &fixture("xacc-mini"), "--vendor-direction", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn prove_reports_all_matching() {
    let o = qai(&["prove"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("13/13 match expected verdicts"), "{text}");
    assert!(text.contains("| QAI-PY-001 | np.zeros(2**n) | n ≥ 40 | SAT | 40 |"), "{text}");
}

#[test]
fn out_file_and_env_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.sarif");
    let o = Command::new(env!("CARGO_BIN_EXE_qai"))
        .args(["scan", &fixture("corpus/qasm-concat"), "--format", "sarif", "--out", out.to_str().unwrap()])
        .env("QAI_TIMESTAMP", TS)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let sarif: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(sarif["version"], "2.1.0");
    assert_eq!(sarif["runs"][0]["invocations"][0]["endTimeUtc"], TS);
    let levels: Vec<&str> =
        sarif["runs"][0]["results"].as_array().unwrap().iter().map(|r| r["level"].as_str().unwrap()).collect();
    assert_eq!(levels, ["error", "error", "error"]);
}

#[test]
fn rule_file_override() {
    let dir = tempfile::tempdir().unwrap();
    let rules = dir.path().join("rules.toml");
    std::fs::write(
        &rules,
        "[[rule]]\nid = \"QAI-DS-002\"\ncwe = 502\nseverity = \"MEDIUM\"\nscope = \"python\"\npattern = 'dill\\.load\\('\n",
    )
    .unwrap();
    let o = qai(&["scan", &fixture("corpus/braket-entry"), "--rules", rules.to_str().unwrap(), "--timestamp", TS]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["targets"][0]["score"]["score"], 97);

    std::fs::write(&rules, "[[rule]]\nid = \"X\"\npattern = '('\ncwe = 1\nseverity = \"HIGH\"\nscope = \"any\"\n")
        .unwrap();
    let o = qai(&["scan", &fixture("corpus/braket-entry"), "--rules", rules.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("rules.toml:3"), "{err}");
}

#[test]
fn no_verify_changes_only_verdicts() {
    let root = fixture("aer-mini");
    let strip = |mut v: Value| {
        v["verified"] = Value::Null;
        v.as_object_mut().unwrap().remove("proof_table");
        for f in v["targets"][0]["findings"].as_array_mut().unwrap() {
            f.as_object_mut().unwrap().remove("verdict");
        }
        v
    };
    let with: Value = serde_json::from_str(&stdout(&qai(&["scan", &root, "--timestamp", TS]))).unwrap();
    let without: Value =
        serde_json::from_str(&stdout(&qai(&["scan", &root, "--timestamp", TS, "--no-verify"]))).unwrap();
    assert_eq!(with["targets"][0]["findings"][0]["verdict"]["status"], "SAT");
    assert_eq!(strip(with), strip(without));
}

#[test]
fn scan_with_vendor_flag_attaches_propagation() {
    let o = qai(&["scan", &fixture("aer-mini"), &fixture("xacc-mini"), "--vendor", "--timestamp", TS]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["propagation"]["chains"][0], serde_json::json!(["aer-mini", "xacc-mini"]));
    let xacc = report["targets"].as_array().unwrap().iter().find(|t| t["name"] == "xacc-mini").unwrap();
    assert_eq!(xacc["score"]["crit"], 5);
}

#[test]
fn markdown_scorecard() {
    let o = qai(&[
        "scan",
        &fixture("corpus/braket-entry"),
        &fixture("corpus/cirq-noise-utils"),
        "--format",
        "markdown",
        "--timestamp",
        TS,
    ]);
    let md = stdout(&o);
    assert!(md.contains("| braket-entry | - | 1 | 0 | 0 | 80/100 | Review Required |"), "{md}");
    assert!(md.contains("| cirq-noise-utils | - | 0 | 0 | 1 | 97/100 | Secure |"), "{md}");
}

#[test]
fn vendor_text_output() {
    let o = qai(&["vendor", &fixture("aer-mini"), &fixture("xacc-mini")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("edge: aer-mini → xacc-mini (12 shared files"), "{text}");

    let o = qai(&["vendor", &fixture("aer-mini"), &fixture("xacc-mini"), "--vendor-direction", "xacc-mini:aer-mini"]);
    assert!(stdout(&o).starts_with("edge: xacc-mini → aer-mini"));
}
