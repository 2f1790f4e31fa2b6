#![no_main]

use cavity_entangler_cli::parse_values;
use libfuzzer_sys::fuzz_target;
use std::str;

fuzz_target!(|bytes: &[u8]| {
    if let Ok(text) = str::from_utf8(bytes) {
        if let Ok(values) = parse_values(text) {
            assert!(!values.is_empty());
        }
    }
});
