//! Line-oriented matching of rules against source files.

mod filter;
mod guard;
mod lexer;
pub(crate) mod tree;

use std::path::Path;
use std::sync::LazyLock;

use regex::{Captures, Regex};
use serde::{Deserialize, Serialize};

use crate::rules::{is_operand_group, ContextPredicate, Rule, RuleSet, Severity};
use crate::verify::Verdict;

pub use filter::{apply_production_filters, is_non_production_path, is_python_definition, DEFINITION_LINE, TEST_PATH};
pub use guard::{detect_guard, Mitigation};
pub use lexer::code_lines;
pub use tree::{scan_tree, ScanError, ScanResult, SkippedFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LanguageKind {
    Cpp,
    Python,
    Qasm,
    Other,
}

/// Language implied by the file extension alone.
pub fn language_for_path(path: &Path) -> Option<LanguageKind> {
    let ext = path.extension()?.to_str()?.to_ascii_lowercase();
    match ext.as_str() {
        "h" | "hh" | "hpp" | "hxx" | "c" | "cc" | "cpp" | "cxx" | "cu" | "cuh" => Some(LanguageKind::Cpp),
        "py" | "pyi" => Some(LanguageKind::Python),
        "qasm" => Some(LanguageKind::Qasm),
        _ => None,
    }
}

/// Classifies a file from its path and contents. Binary or non-UTF-8
/// content is always `Other`; extensionless files are sniffed.
pub fn classify(path: &Path, bytes: &[u8]) -> LanguageKind {
    if bytes.contains(&0) {
        return LanguageKind::Other;
    }
    let Ok(text) = std::str::from_utf8(bytes) else {
        return LanguageKind::Other;
    };
    if let Some(kind) = language_for_path(path) {
        return kind;
    }
    if path.extension().is_some() {
        return LanguageKind::Other;
    }
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let first = text.lines().next().unwrap_or("");
    if first.starts_with("#!") && first.contains("python") {
        LanguageKind::Python
    } else if text.trim_start().starts_with("OPENQASM") {
        LanguageKind::Qasm
    } else {
        LanguageKind::Other
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub rule_id: String,
    pub cwe: u32,
    pub severity: Severity,
    /// `/`-separated, relative to the scanned root.
    pub path: String,
    pub line: usize,
    pub column: usize,
    pub snippet: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operand: Option<String>,
    pub mitigation: Mitigation,
    pub mitigated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suppressed_by_filter: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl Finding {
    /// Whether the finding counts against the score.
    pub fn is_active(&self) -> bool {
        !self.mitigated && self.suppressed_by_filter.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanOptions {
    pub include_test_paths: bool,
    pub guard_window: usize,
    pub follow_symlinks: bool,
    pub max_file_bytes: u64,
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            include_test_paths: false,
            guard_window: 12,
            follow_symlinks: false,
            max_file_bytes: 4 * 1024 * 1024,
            jobs: None,
        }
    }
}

const SNIPPET_CHARS: usize = 200;

static STRING_LITERAL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r#"^(?i:rb|br|r|b|u)?(?:"""[\s\S]*"""|'''[\s\S]*'''|"(?:[^"\\]|\\.)*"|'(?:[^'\\]|\\.)*')$"#).unwrap()
});
static WEIGHTS_ONLY: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\bweights_only\s*=\s*True\b").unwrap());
static SAFE_LOADER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\bLoader\s*=\s*(?:yaml\.)?C?(?:Safe|Base)Loader\b").unwrap());

/// First argument of the call whose `(` is the last one inside the match.
/// Reads into `rest` when the call continues on following lines.
fn first_argument(code: &str, open: usize, rest: &[String]) -> String {
    let mut text = code[open + 1..].to_string();
    for more in rest.iter().take(4) {
        if !text.trim().is_empty() {
            break;
        }
        text.push(' ');
        text.push_str(more);
    }
    let b = text.as_bytes();
    let mut depth = 0i32;
    let mut quote: Option<u8> = None;
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        match quote {
            Some(_) if c == b'\\' => i += 1,
            Some(q) if c == q => quote = None,
            Some(_) => {}
            None => match c {
                b'"' | b'\'' => quote = Some(c),
                b'(' | b'[' | b'{' => depth += 1,
                b')' | b']' | b'}' if depth == 0 => break,
                b')' | b']' | b'}' => depth -= 1,
                b',' if depth == 0 => break,
                _ => {}
            },
        }
        i += 1;
    }
    text[..i.min(text.len())].trim().to_string()
}

fn is_string_literal(arg: &str) -> bool {
    !arg.is_empty() && STRING_LITERAL.is_match(arg)
}

fn predicate_holds(p: ContextPredicate, code: &str, caps: &Captures<'_>, rest: &[String]) -> bool {
    match p {
        ContextPredicate::ArgNotStringLiteral => {
            let m = caps.get(0).expect("group 0 always participates");
            let Some(rel) = m.as_str().rfind('(') else {
                return true;
            };
            !is_string_literal(&first_argument(code, m.start() + rel, rest))
        }
        ContextPredicate::NoWeightsOnlyFlag => !WEIGHTS_ONLY.is_match(code),
        ContextPredicate::NoSafeLoader => !SAFE_LOADER.is_match(code),
        ContextPredicate::CallsiteNotDefinition => !is_python_definition(code),
    }
}

fn operand_of(rule: &Rule, caps: &Captures<'_>) -> Option<String> {
    rule.matcher
        .regex()
        .capture_names()
        .flatten()
        .filter(|n| is_operand_group(n))
        .find_map(|n| caps.name(n))
        .map(|m| m.as_str().to_string())
}

fn snippet(line: &str) -> String {
    let t = line.trim();
    match t.char_indices().nth(SNIPPET_CHARS) {
        Some((cut, _)) => format!("{}...", &t[..cut]),
        None => t.to_string(),
    }
}

/// Scans one file's text. Findings are ordered by line, then rule id.
pub fn scan_source(
    rel_path: &str,
    text: &str,
    kind: LanguageKind,
    rules: &RuleSet,
    opts: &ScanOptions,
) -> Vec<Finding> {
    let code = code_lines(text, kind);
    let raw: Vec<&str> = text.lines().collect();
    let applicable: Vec<&Rule> = rules.iter().filter(|r| r.scope.applies_to(kind)).collect();
    let window = opts.guard_window.max(1);
    let mut findings = Vec::new();
    for (idx, line) in code.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rest = &code[idx + 1..];
        for rule in &applicable {
            let hit = rule
                .matcher
                .regex()
                .captures_iter(line)
                .find(|caps| rule.predicates.iter().all(|&p| predicate_holds(p, line, caps, rest)));
            let Some(caps) = hit else {
                continue;
            };
            let start = caps.get(0).map_or(0, |m| m.start());
            let operand = operand_of(rule, &caps);
            let mitigation =
                operand.as_deref().map_or(Mitigation::Unguarded, |op| detect_guard(&code, idx, op, kind, window));
            findings.push(Finding {
                rule_id: rule.id.clone(),
                cwe: rule.cwe,
                severity: rule.severity,
                path: rel_path.to_string(),
                line: idx + 1,
                column: line[..start].chars().count() + 1,
                snippet: snippet(raw.get(idx).copied().unwrap_or(line)),
                operand,
                mitigation,
                mitigated: mitigation == Mitigation::HardGuard,
                suppressed_by_filter: apply_production_filters(rel_path, line, kind, rule, opts.include_test_paths)
                    .map(str::to_string),
                verdict: None,
                provenance: None,
            });
        }
    }
    findings.sort_by(|a, b| (a.line, &a.rule_id).cmp(&(b.line, &b.rule_id)));
    findings
}
