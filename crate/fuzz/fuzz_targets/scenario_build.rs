#![no_main]

use cavity_entangler_cli::Scenario;
use libfuzzer_sys::fuzz_target;
use std::str;

fuzz_target!(|bytes: &[u8]| {
    if let Ok(text) = str::from_utf8(bytes) {
        let mut scenario = Scenario::default();
        if scenario.apply_config_text(text).is_ok() {
            if let Ok((params, init, grid)) = scenario.validate() {
                assert!(params.lambda > 0.0);
                assert!(grid.len() >= 2);
                let norm = init.c01.norm_sqr() + init.c02.norm_sqr();
                assert!((norm - 1.0).abs() < 1e-9);
            }
        }
    }
});
