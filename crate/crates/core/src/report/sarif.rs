use serde_json::{json, Value};

use super::ScanReport;
use crate::rules::Severity;
use crate::scan::Finding;

const SARIF_SCHEMA: &str = "https://json.schemastore.org/sarif-2.1.0.json";

/// CVSS-style band used by code-scanning front ends to rank results.
pub fn security_severity(severity: Severity) -> &'static str {
    match severity {
        Severity::Critical => "9.8",
        Severity::High => "7.5",
        Severity::Medium => "5.0",
    }
}

fn level(severity: Severity) -> &'static str {
    match severity {
        Severity::Critical | Severity::High => "error",
        Severity::Medium => "warning",
    }
}

fn artifact_uri(root: &str, path: &str) -> String {
    let root = root.replace('\\', "/");
    let root = root.trim_start_matches("./").trim_end_matches('/');
    if root.is_empty() || root == "." {
        path.to_string()
    } else {
        format!("{root}/{path}")
    }
}

fn result(finding: &Finding, root: &str, target: &str, rule_index: Option<usize>) -> Value {
    let mut properties = json!({
        "framework": target,
        "mitigation": finding.mitigation.as_str(),
    });
    if let Some(v) = &finding.verdict {
        properties["verdict"] = json!(v);
    }
    if let Some(p) = &finding.provenance {
        properties["provenance"] = json!(p);
    }
    let mut message = format!("{} (CWE-{})", finding.rule_id, finding.cwe);
    if let Some(op) = &finding.operand {
        message.push_str(&format!(" on operand `{op}`"));
    }
    let mut r = json!({
        "ruleId": finding.rule_id,
        "level": level(finding.severity),
        "message": { "text": message },
        "locations": [{
            "physicalLocation": {
                "artifactLocation": { "uri": artifact_uri(root, &finding.path) },
                "region": {
                    "startLine": finding.line,
                    "startColumn": finding.column,
                    "snippet": { "text": finding.snippet },
                },
            },
        }],
        "properties": properties,
    });
    if let Some(i) = rule_index {
        r["ruleIndex"] = json!(i);
    }
    let mut suppressions = Vec::new();
    if let Some(filter) = &finding.suppressed_by_filter {
        suppressions.push(json!({ "kind": "external", "justification": format!("production filter: {filter}") }));
    }
    if finding.mitigated {
        suppressions.push(json!({ "kind": "inSource", "justification": "hard bounds check precedes the sink" }));
    }
    if !suppressions.is_empty() {
        r["suppressions"] = json!(suppressions);
    }
    r
}

/// One run; every finding appears exactly once, inactive ones with suppressions.
pub fn emit_sarif(report: &ScanReport) -> String {
    let rules: Vec<Value> = report
        .rules
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "shortDescription": { "text": r.description },
                "helpUri": format!("https://cwe.mitre.org/data/definitions/{}.html", r.cwe),
                "defaultConfiguration": { "level": level(r.severity) },
                "properties": {
                    "tags": ["security", format!("external/cwe/cwe-{}", r.cwe)],
                    "security-severity": security_severity(r.severity),
                    "severity": r.severity.as_str(),
                },
            })
        })
        .collect();
    let results: Vec<Value> = report
        .findings()
        .map(|(t, f)| result(f, &t.root, &t.name, report.rules.iter().position(|r| r.id == f.rule_id)))
        .collect();
    let doc = json!({
        "$schema": SARIF_SCHEMA,
        "version": "2.1.0",
        "runs": [{
            "tool": {
                "driver": {
                    "name": report.tool.name,
                    "version": report.tool.version,
                    "rules": rules,
                },
            },
            "invocations": [{ "executionSuccessful": true, "endTimeUtc": report.timestamp }],
            "results": results,
        }],
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
    s.push('\n');
    s
}
