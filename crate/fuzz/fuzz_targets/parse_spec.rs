//! Fuzz the sequence-spec text grammar (`fib`, `plrs:…`, `poly:…`).
//!
//! Invariants: the parser never panics, and anything it accepts survives a
//! Display → reparse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;

use compos::SequenceSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = text.parse::<SequenceSpec>() else { return };
    let reparsed: SequenceSpec = spec
        .to_string()
        .parse()
        .expect("accepted spec must reparse");
    assert_eq!(reparsed, spec, "round trip changed the spec");
    // accepted specs have a well-defined admissible range
    let _ = spec.min_index();
});
