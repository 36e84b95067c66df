#![no_main]
use std::path::Path;

use libfuzzer_sys::fuzz_target;
use qai_core::scan::{classify, LanguageKind};

fuzz_target!(|data: &[u8]| {
    for name in ["model.bin", "run", "state.py", "kernel.cu", "circuit.qasm"] {
        let kind = classify(Path::new(name), data);
        if std::str::from_utf8(data).is_err() || data.contains(&0) {
            assert_eq!(kind, LanguageKind::Other);
        }
    }
});
