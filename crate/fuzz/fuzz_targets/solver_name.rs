#![no_main]

use cavity_entangler::dispersive::Regime;
use cavity_entangler_cli::{Axis, Solver};
use libfuzzer_sys::fuzz_target;
use std::str;

fuzz_target!(|bytes: &[u8]| {
    if let Ok(s) = str::from_utf8(bytes) {
        if let Ok(solver) = s.parse::<Solver>() {
            assert_eq!(solver.to_string().parse::<Solver>().unwrap(), solver);
        }
        if let Ok(regime) = s.parse::<Regime>() {
            assert_eq!(regime.to_string(), s);
        }
        let _ = s.parse::<Axis>();
    }
});
