#![no_main]
use libfuzzer_sys::fuzz_target;
use qai_core::report::{emit_json, emit_markdown, emit_sarif, parse_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(report) = parse_json(text) else { return };
    let json = emit_json(&report);
    assert_eq!(parse_json(&json).expect("emitted json re-parses"), report);
    let _ = emit_sarif(&report);
    let _ = emit_markdown(&report.scorecard(), report.proof_table.as_ref());
});
