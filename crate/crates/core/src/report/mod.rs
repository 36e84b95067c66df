//! Serialized scan results: JSON, SARIF 2.1.0 and markdown.

mod markdown;
mod sarif;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::rules::{RuleSet, Severity};
use crate::scan::{Finding, ScanOptions, SkippedFile};
use crate::score::{scorecard_from_rows, FrameworkScore, Scorecard};
use crate::vendor::ChainReport;
use crate::verify::ProofTable;

pub use markdown::{emit_markdown, render_proof_table};
pub use sarif::{emit_sarif, security_severity};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "qai";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo { name: TOOL_NAME.into(), version: env!("CARGO_PKG_VERSION").into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleMeta {
    pub id: String,
    pub cwe: u32,
    pub severity: Severity,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetReport {
    pub name: String,
    pub root: String,
    pub files_scanned: usize,
    pub skipped: Vec<SkippedFile>,
    pub findings: Vec<Finding>,
    pub score: FrameworkScore,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub timestamp: String,
    pub options: ScanOptions,
    pub verified: bool,
    /// Metadata for every rule that produced a finding, by id.
    pub rules: Vec<RuleMeta>,
    pub targets: Vec<TargetReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proof_table: Option<ProofTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub propagation: Option<ChainReport>,
}

impl ScanReport {
    pub fn new(timestamp: &str, options: ScanOptions, verified: bool) -> Self {
        ScanReport {
            schema_version: SCHEMA_VERSION,
            tool: ToolInfo::default(),
            timestamp: timestamp.to_string(),
            options,
            verified,
            rules: Vec::new(),
            targets: Vec::new(),
            proof_table: None,
            propagation: None,
        }
    }

    /// Fills `rules` from the ids that occur in findings.
    pub fn collect_rule_meta(&mut self, rules: &RuleSet) {
        let ids: BTreeSet<&str> =
            self.targets.iter().flat_map(|t| t.findings.iter().map(|f| f.rule_id.as_str())).collect();
        self.rules = ids
            .into_iter()
            .filter_map(|id| rules.get(id))
            .map(|r| RuleMeta {
                id: r.id.clone(),
                cwe: r.cwe,
                severity: r.severity,
                description: r.description.clone(),
            })
            .collect();
    }

    pub fn scorecard(&self) -> Scorecard {
        scorecard_from_rows(self.targets.iter().map(|t| t.score.clone()).collect())
    }

    pub fn findings(&self) -> impl Iterator<Item = (&TargetReport, &Finding)> {
        self.targets.iter().flat_map(|t| t.findings.iter().map(move |f| (t, f)))
    }
}

/// Pretty-printed JSON with a trailing newline. Keys follow declaration order.
pub fn emit_json(report: &ScanReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<ScanReport, serde_json::Error> {
    serde_json::from_str(text)
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;
    use crate::rules::load_builtin_rules;
    use crate::scan::{scan_source, LanguageKind};

    pub fn sample_report() -> ScanReport {
        let rules = load_builtin_rules();
        let opts = ScanOptions::default();
        let py = "import pickle\nstate = pickle.load(f)\nN = 2**n\n";
        let mut findings = scan_source("pkg/io.py", py, LanguageKind::Python, &rules, &opts);
        findings.extend(scan_source("tests/test_io.py", "x = pickle.load(f)\n", LanguageKind::Python, &rules, &opts));
        let cpp = "void f(size_t n) {\n  if (n > 63) throw 1;\n  s = BITS[n];\n}\n";
        findings.extend(scan_source("src/qv.hpp", cpp, LanguageKind::Cpp, &rules, &opts));
        let mut report = ScanReport::new("2026-01-01T00:00:00Z", opts, true);
        report.targets.push(TargetReport {
            name: "demo".into(),
            root: "fixtures/demo".into(),
            files_scanned: 3,
            skipped: Vec::new(),
            score: FrameworkScore::from_findings("demo", &findings),
            findings,
        });
        report.collect_rule_meta(&rules);
        report
    }
}
