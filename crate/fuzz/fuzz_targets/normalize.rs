#![no_main]
use libfuzzer_sys::fuzz_target;
use qai_core::vendor::{content_hash, normalize, Fingerprint};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let once = normalize(text);
    assert_eq!(normalize(&once), once);
    assert_eq!(content_hash(text), content_hash(&text.replace('\n', "\r\n")));
    let fp = Fingerprint::of("a", text);
    assert_eq!(fp.size_bytes, once.len() as u64);
});
