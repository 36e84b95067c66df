#![no_main]
use libfuzzer_sys::fuzz_target;
use qai_core::rules::RuleSet;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(set) = RuleSet::default().merge_toml(text, None) {
        let again = RuleSet::default().merge_toml(&set.to_toml(), None).expect("serialized rules re-parse");
        assert!(set.iter().eq(again.iter()));
    }
});
