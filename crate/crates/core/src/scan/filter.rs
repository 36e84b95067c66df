//! Production filters: findings they hit are kept but marked suppressed.

use std::sync::LazyLock;

use regex::Regex;

use crate::rules::{Rule, Target};

use super::LanguageKind;

pub const TEST_PATH: &str = "test-path";
pub const DEFINITION_LINE: &str = "definition-line";

const NON_PRODUCTION_DIRS: [&str; 7] = ["test", "tests", "testing", "benchmark", "benchmarks", "examples", "docs"];

static PY_DEF: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\s*(?:async\s+)?def\s").unwrap());

/// True when any directory component of a `/`-separated relative path is a
/// test, benchmark, example or docs directory.
pub fn is_non_production_path(rel_path: &str) -> bool {
    let mut parts: Vec<&str> = rel_path.split('/').collect();
    parts.pop();
    parts.iter().any(|p| NON_PRODUCTION_DIRS.contains(&p.to_ascii_lowercase().as_str()))
}

pub fn is_python_definition(code: &str) -> bool {
    PY_DEF.is_match(code)
}

/// The filter that suppresses a finding of `rule` on `code`, if any.
pub fn apply_production_filters(
    rel_path: &str,
    code: &str,
    kind: LanguageKind,
    rule: &Rule,
    include_test_paths: bool,
) -> Option<&'static str> {
    if !include_test_paths && is_non_production_path(rel_path) {
        return Some(TEST_PATH);
    }
    if kind == LanguageKind::Python && rule.target != Target::Definition && is_python_definition(code) {
        return Some(DEFINITION_LINE);
    }
    None
}
