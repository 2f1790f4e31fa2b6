#![no_main]

use cavity_entangler_cli::config::parse_config;
use libfuzzer_sys::fuzz_target;
use std::str;

fuzz_target!(|bytes: &[u8]| {
    if let Ok(text) = str::from_utf8(bytes) {
        if let Ok(pairs) = parse_config(text) {
            let rendered: String = pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
            assert_eq!(parse_config(&rendered).unwrap(), pairs);
        }
    }
});
