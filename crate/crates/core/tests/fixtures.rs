use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use qai_core::rules::{Provenance, RuleSet};
use qai_core::scan::{scan_tree, Finding, ScanOptions};
use qai_core::vendor::{
    build_chain_report, carry_findings, detect_vendoring, fingerprint_tree, merge_carried, DEFAULT_MIN_SHARED_FILES,
};
use qai_core::{build_scorecard, load_builtin_rules, FrameworkScore, Grade, Severity};

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

fn scan(rel: &str) -> Vec<Finding> {
    scan_tree(&fixture(rel), &load_builtin_rules(), &ScanOptions::default()).unwrap().findings
}

fn keys(findings: &[Finding]) -> BTreeSet<(String, String, usize)> {
    findings.iter().map(|f| (f.rule_id.clone(), f.path.clone(), f.line)).collect()
}

#[test]
fn aer_listing_lines() {
    let findings = scan("aer-mini");
    let at = |path: &str| -> Vec<(usize, &str)> {
        findings.iter().filter(|f| f.path.ends_with(path)).map(|f| (f.line, f.rule_id.as_str())).collect()
    };
    assert_eq!(at("statevector/qubitvector.hpp"), [(33, "QAI-001"), (40, "QAI-005")]);
    assert_eq!(at("unitarymatrix.hpp"), [(26, "QAI-002"), (36, "QAI-005"), (37, "QAI-003")]);
    let row = FrameworkScore::from_findings("aer-mini", &findings);
    assert_eq!((row.crit, row.high, row.med, row.score, row.grade), (5, 7, 0, 0, Grade::Broken));
}

#[test]
fn vendoring_is_symmetric_in_shared_files() {
    let a = fingerprint_tree(&fixture("aer-mini"), false).unwrap();
    let b = fingerprint_tree(&fixture("xacc-mini"), false).unwrap();
    let ab = detect_vendoring(&a, &b, DEFAULT_MIN_SHARED_FILES, None);
    let ba = detect_vendoring(&b, &a, DEFAULT_MIN_SHARED_FILES, None);
    assert_eq!(ab.len(), 1);
    assert_eq!(ab, ba);
    assert_eq!((ab[0].source_root.as_str(), ab[0].target_root.as_str()), ("aer-mini", "xacc-mini"));
    assert_eq!(ab[0].target_prefix, "quantum/plugins/ibm/aer");
    assert_eq!(ab[0].shared_files, a.fingerprints.len());
}

#[test]
fn threshold_semantics() {
    let a = fingerprint_tree(&fixture("aer-mini"), false).unwrap();
    let b = fingerprint_tree(&fixture("xacc-mini"), false).unwrap();
    let n = a.fingerprints.len();
    assert!(detect_vendoring(&a, &b, n + 1, None).is_empty());
    assert_eq!(detect_vendoring(&a, &b, n, None).len(), 1);
    let c = fingerprint_tree(&fixture("corpus/qibo-numpy"), false).unwrap();
    assert!(detect_vendoring(&a, &c, 1, None).is_empty());
}

#[test]
fn carried_findings_are_conserved_and_not_double_counted() {
    let a = fingerprint_tree(&fixture("aer-mini"), false).unwrap();
    let b = fingerprint_tree(&fixture("xacc-mini"), false).unwrap();
    let edge = detect_vendoring(&a, &b, DEFAULT_MIN_SHARED_FILES, None).remove(0);
    let source = scan("aer-mini");
    let carried = carry_findings(&edge, &source);
    assert!(carried.len() <= source.len());
    assert_eq!(carried.iter().filter(|f| f.severity == Severity::Critical).count(), 5);
    let target_hashes: BTreeSet<(&str, &str)> =
        b.fingerprints.iter().map(|f| (f.rel_path.as_str(), f.normalized_hash.as_str())).collect();
    for f in &carried {
        assert!(target_hashes.iter().any(|(p, _)| *p == f.path), "{}", f.path);
        assert_eq!(f.provenance.as_deref(), Some("vendored-from: aer-mini"));
    }

    let mut own = scan("xacc-mini");
    let before = FrameworkScore::from_findings("xacc-mini", &own);
    merge_carried(&mut own, &carried);
    assert_eq!(keys(&own).len(), own.len());
    assert_eq!(FrameworkScore::from_findings("xacc-mini", &own), before);

    let report = build_chain_report(vec![edge]);
    assert_eq!(report.rendered_chains(), ["aer-mini → xacc-mini"]);
    assert!(report.warnings.is_empty());
}

#[test]
fn include_tests_never_reduces_findings() {
    let rules = load_builtin_rules();
    let root = fixture("corpus/production-filter");
    let off = scan_tree(&root, &rules, &ScanOptions::default()).unwrap().findings;
    let on =
        scan_tree(&root, &rules, &ScanOptions { include_test_paths: true, ..Default::default() }).unwrap().findings;
    assert_eq!(keys(&off), keys(&on));
    assert!(on.iter().filter(|f| f.is_active()).count() > off.iter().filter(|f| f.is_active()).count());
    let suppressed: Vec<&str> =
        off.iter().filter_map(|f| f.suppressed_by_filter.as_deref().map(|_| f.path.as_str())).collect();
    assert_eq!(suppressed, ["benchmarks/bench_alloc.py", "tests/test_loader.py"]);
}

#[test]
fn adding_a_rule_never_removes_findings() {
    let full = load_builtin_rules();
    let root = fixture("corpus/qiskit-terra-api");
    let all = keys(&scan_tree(&root, &full, &ScanOptions::default()).unwrap().findings);
    let mut partial = RuleSet::from_rules(std::iter::empty(), Provenance::Builtin);
    let mut prev = BTreeSet::new();
    for rule in full.iter() {
        partial.insert(rule.clone());
        let now = keys(&scan_tree(&root, &partial, &ScanOptions::default()).unwrap().findings);
        assert!(prev.is_subset(&now));
        prev = now;
    }
    assert_eq!(prev, all);
}

#[test]
fn scorecard_over_three_trees() {
    let trees = [
        ("braket-entry", scan("corpus/braket-entry")),
        ("cirq-noise-utils", scan("corpus/cirq-noise-utils")),
        ("paddle-state", scan("corpus/paddle-state")),
    ];
    let card = build_scorecard(trees.iter().map(|(n, f)| (*n, f.as_slice()))).unwrap();
    let rows: Vec<(&str, u32, u32, u32, u32)> =
        card.rows.iter().map(|r| (r.name.as_str(), r.crit, r.high, r.med, r.score)).collect();
    assert_eq!(rows, [("braket-entry", 1, 0, 0, 80), ("paddle-state", 0, 2, 0, 84), ("cirq-noise-utils", 0, 0, 1, 97)]);
    assert_eq!((card.totals.crit, card.totals.high, card.totals.med), (1, 2, 1));
}

#[test]
fn no_finding_on_comment_lines() {
    for rel in ["aer-mini", "xacc-mini", "corpus/tequila-pickle", "corpus/qasm-concat"] {
        let root = fixture(rel);
        for f in scan(rel) {
            let text = std::fs::read_to_string(root.join(&f.path)).unwrap();
            let line = text.lines().nth(f.line - 1).unwrap().trim_start();
            assert!(!line.starts_with('#') && !line.starts_with("//"), "{rel}/{}:{}", f.path, f.line);
        }
    }
}
