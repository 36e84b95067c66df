#![no_main]
use libfuzzer_sys::fuzz_target;
use qai_core::verify::{parse_formula, solve_within, Status, Witness};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(formula) = parse_formula(text) else { return };
    // Display output must parse back to the same formula.
    assert_eq!(parse_formula(&formula.to_string()).as_ref(), Ok(&formula));
    // Conjunctions of sparse two-sided predicates can take millions of passes.
    let Some(verdict) = solve_within(&formula, 20_000) else { return };
    match (verdict.status, verdict.witness) {
        (Status::Sat, Some(Witness::Int(n))) => {
            assert!(formula.holds(n));
            if n > 0 {
                assert!(!formula.holds(n - 1));
                assert!(!formula.holds(0));
            }
        }
        (Status::Unsat, None) => {
            for n in [0, 1, 63, 64, u64::MAX / 2, u64::MAX] {
                assert!(!formula.holds(n));
            }
        }
        other => panic!("inconsistent verdict {other:?}"),
    }
});
