//! Plain-text persistence for count tables.
//!
//! The format is line-oriented and versioned so dumps survive format
//! evolution; integers are decimal with no size limit:
//!
//! ```text
//! compos-table v1
//! series fib@2
//! limit 4
//! columns n count summands ones
//! 0 1 0 0
//! 1 1 1 1
//! 2 2 3 2
//! 3 4 8 5
//! 4 7 19 12
//! ```
//!
//! Parsing is strict — wrong version, a row index out of step, a field
//! count mismatch, or trailing garbage all fail with the 1-based line
//! number — because dumps feed back into arithmetic.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::count::CountTable;
use crate::error::{Error, Result};
use crate::series::RestrictedSeries;
use crate::spec::SequenceSpec;

const MAGIC: &str = "compos-table v1";

/// Serialize a table in the v1 text format.
pub fn render_table_dump(table: &CountTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "series {}", table.series());
    let _ = writeln!(out, "limit {}", table.limit());
    let _ = writeln!(out, "columns n count summands ones");
    for n in 0..=table.limit() {
        let _ = writeln!(
            out,
            "{n} {} {} {}",
            table.count(n),
            table.summand_total(n),
            table.ones_total(n)
        );
    }
    out
}

fn fail(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_biguint(tok: &str, line: usize, what: &str) -> Result<BigUint> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(fail(line, format!("{what} must be a non-negative decimal integer")));
    }
    BigUint::from_str(tok).map_err(|e| fail(line, format!("{what}: {e}")))
}

/// Parse the v1 text format back into a table.
pub fn parse_table_dump(s: &str) -> Result<CountTable> {
    let mut lines = s.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (ln, magic) = lines.next().ok_or_else(|| fail(1, "empty dump"))?;
    if magic != MAGIC {
        return Err(fail(ln, format!("expected header `{MAGIC}`")));
    }

    let (ln, series_line) = lines.next().ok_or_else(|| fail(2, "missing series line"))?;
    let series_text = series_line
        .strip_prefix("series ")
        .ok_or_else(|| fail(ln, "expected `series <spec>@<cut>`"))?;
    let (spec_text, cut_text) = series_text
        .rsplit_once('@')
        .ok_or_else(|| fail(ln, "series must be `<spec>@<cut>`"))?;
    let spec = SequenceSpec::from_str(spec_text).map_err(|e| fail(ln, e.to_string()))?;
    let cut: u64 =
        cut_text.parse().map_err(|_| fail(ln, "cut index must be a u64"))?;
    let series = RestrictedSeries::new(spec, cut).map_err(|e| fail(ln, e.to_string()))?;

    let (ln, limit_line) = lines.next().ok_or_else(|| fail(3, "missing limit line"))?;
    let limit: u64 = limit_line
        .strip_prefix("limit ")
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| fail(ln, "expected `limit <u64>`"))?;

    let (ln, columns) = lines.next().ok_or_else(|| fail(4, "missing columns line"))?;
    if columns != "columns n count summands ones" {
        return Err(fail(ln, "expected `columns n count summands ones`"));
    }

    let rows = limit
        .checked_add(1)
        .ok_or_else(|| fail(3, "limit overflows"))? as usize;
    let mut counts = Vec::new();
    let mut summands = Vec::new();
    let mut ones = Vec::new();
    for expected in 0..rows as u64 {
        let (ln, row) = lines
            .next()
            .ok_or_else(|| fail(5 + expected as usize, format!("missing record {expected}")))?;
        let mut f = row.split_ascii_whitespace();
        let n_tok = f.next().ok_or_else(|| fail(ln, "empty record"))?;
        let c_tok = f.next().ok_or_else(|| fail(ln, "record needs 4 fields"))?;
        let w_tok = f.next().ok_or_else(|| fail(ln, "record needs 4 fields"))?;
        let u_tok = f.next().ok_or_else(|| fail(ln, "record needs 4 fields"))?;
        if f.next().is_some() {
            return Err(fail(ln, "record has more than 4 fields"));
        }
        let n: u64 = n_tok.parse().map_err(|_| fail(ln, "row index must be a u64"))?;
        if n != expected {
            return Err(fail(ln, format!("row index {n} out of step (expected {expected})")));
        }
        counts.push(parse_biguint(c_tok, ln, "count")?);
        summands.push(parse_biguint(w_tok, ln, "summands")?);
        ones.push(parse_biguint(u_tok, ln, "ones")?);
    }
    if let Some((ln, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(fail(ln, format!("trailing garbage: {extra:?}")));
    }
    Ok(CountTable::from_raw(series, counts, summands, ones))
}
