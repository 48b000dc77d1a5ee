#![no_main]

use libfuzzer_sys::fuzz_target;
use sixtrig::input::parse_k_range;

fuzz_target!(|text: &str| {
    if let Ok(range) = parse_k_range(text) {
        assert!(range.start() <= range.end());
        let again = parse_k_range(&format!("{}..{}", range.start(), range.end())).expect("canonical form parses");
        assert_eq!(again, range);
    }
});
