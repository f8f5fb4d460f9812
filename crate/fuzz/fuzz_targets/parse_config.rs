//! Fuzz the flat key=value configuration grammar.
//!
//! Invariants: the parser never panics, errors carry a plausible line
//! number, and any accepted overlay can be applied to the default
//! configuration.

#![no_main]

use libfuzzer_sys::fuzz_target;

use compos_cli::{parse_config_text, CliConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    match parse_config_text(text) {
        Ok(overlay) => {
            let _ = CliConfig::default().with_overlay(&overlay);
        }
        Err(e) => {
            assert!(e.line <= text.lines().count(), "error line out of range");
        }
    }
});
