//! Fuzz the versioned count-table text format.
//!
//! Invariants: the parser never panics, never allocates proportionally to
//! a claimed-but-absent `limit`, and anything it accepts survives a
//! render → reparse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;

use compos::table_io::{parse_table_dump, render_table_dump};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(table) = parse_table_dump(text) else { return };
    let rendered = render_table_dump(&table);
    let reparsed = parse_table_dump(&rendered).expect("rendered dump must reparse");
    assert_eq!(reparsed, table, "round trip changed the table");
});
