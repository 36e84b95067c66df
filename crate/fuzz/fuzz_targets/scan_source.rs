#![no_main]
use std::sync::LazyLock;

use libfuzzer_sys::fuzz_target;
use qai_core::load_builtin_rules;
use qai_core::rules::RuleSet;
use qai_core::scan::{scan_source, LanguageKind, ScanOptions};

static RULES: LazyLock<RuleSet> = LazyLock::new(load_builtin_rules);

fuzz_target!(|data: &[u8]| {
    let Some((&selector, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let (kind, path) = match selector % 3 {
        0 => (LanguageKind::Cpp, "src/fuzz.hpp"),
        1 => (LanguageKind::Python, "pkg/fuzz.py"),
        _ => (LanguageKind::Qasm, "fuzz.qasm"),
    };
    let findings = scan_source(path, text, kind, &RULES, &ScanOptions::default());
    let lines = text.lines().count().max(1);
    for pair in findings.windows(2) {
        assert!((pair[0].line, &pair[0].rule_id) < (pair[1].line, &pair[1].rule_id));
    }
    for f in &findings {
        assert!(f.line >= 1 && f.line <= lines + 1);
    }
});
