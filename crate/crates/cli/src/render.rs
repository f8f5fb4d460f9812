//! Output rendering. Every function returns the complete, newline-terminated
//! text for one command so output is byte-deterministic and testable.
//!
//! Conventions: PLAIN prints `key value` lines (roots to 7 decimals, error
//! bounds in scientific notation); CSV prints a header row, reals as
//! 7-decimal fixed point, and integers as decimal text; JSON prints one
//! object per record with keys matching the library field names, counts as
//! decimal strings, and reals as full-precision numbers.

use compos::{
    Dyadic, RatioClassification, RestrictedSeries, RootAnalysis, SequenceSpec, Stats, TableRow,
};
use serde_json::{json, Value};

use crate::config::OutputFormat;

fn dec7(v: &Dyadic) -> String {
    v.to_decimal(7)
}

fn sci(v: &Dyadic) -> String {
    format!("{:e}", v.to_f64())
}

fn opt_f64_plain(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.7}"),
        None => "null".to_string(),
    }
}

fn opt_f64_csv(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.7}"),
        None => String::new(),
    }
}

fn opt_f64_json(v: Option<f64>) -> Value {
    match v {
        Some(x) => json!(x),
        None => Value::Null,
    }
}

/// RFC 4180-style quoting: fields containing separators or quotes are
/// wrapped and inner quotes doubled. Sequence labels contain commas.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",")
}

fn json_line(value: Value) -> String {
    let mut s = value.to_string();
    s.push('\n');
    s
}

pub fn render_root(a: &RootAnalysis, fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Plain => format!(
            "series {}\ngamma {}\ngamma_error {}\nderivative_at_root {}\ncount_constant {}\nmean_slope {}\nprecision_bits {}\n",
            a.series,
            dec7(&a.gamma),
            sci(&a.gamma_error),
            dec7(&a.derivative_at_root),
            dec7(&a.count_constant),
            dec7(&a.mean_slope),
            a.precision_bits,
        ),
        OutputFormat::Csv => {
            let header = "series,gamma,gamma_error,derivative_at_root,count_constant,mean_slope,precision_bits";
            let row = csv_line(&[
                a.series.to_string(),
                dec7(&a.gamma),
                dec7(&a.gamma_error),
                dec7(&a.derivative_at_root),
                dec7(&a.count_constant),
                dec7(&a.mean_slope),
                a.precision_bits.to_string(),
            ]);
            format!("{header}\n{row}\n")
        }
        OutputFormat::Json => json_line(json!({
            "series": a.series.to_string(),
            "gamma": a.gamma.to_f64(),
            "gamma_error": a.gamma_error.to_f64(),
            "derivative_at_root": a.derivative_at_root.to_f64(),
            "count_constant": a.count_constant.to_f64(),
            "mean_slope": a.mean_slope.to_f64(),
            "precision_bits": a.precision_bits,
        })),
    }
}

/// Renders composition statistics at one n. `None` is the no-compositions
/// case: count 0 with null statistics.
pub fn render_stats(
    series: &RestrictedSeries,
    n: u64,
    stats: Option<&Stats>,
    fmt: OutputFormat,
) -> String {
    let zero = "0".to_string();
    let (count, summands, ones, mean, density) = match stats {
        Some(s) => (
            s.count.to_string(),
            s.total_summands.to_string(),
            s.total_ones.to_string(),
            s.mean_summands,
            s.ones_density,
        ),
        None => (zero.clone(), zero.clone(), zero, None, None),
    };
    match fmt {
        OutputFormat::Plain => format!(
            "series {series}\nn {n}\ncount {count}\ntotal_summands {summands}\ntotal_ones {ones}\nmean_summands {}\nones_density {}\n",
            opt_f64_plain(mean),
            opt_f64_plain(density),
        ),
        OutputFormat::Csv => {
            let header = "series,n,count,total_summands,total_ones,mean_summands,ones_density";
            let row = csv_line(&[
                series.to_string(),
                n.to_string(),
                count,
                summands,
                ones,
                opt_f64_csv(mean),
                opt_f64_csv(density),
            ]);
            format!("{header}\n{row}\n")
        }
        OutputFormat::Json => json_line(json!({
            "series": series.to_string(),
            "n": n,
            "count": count,
            "total_summands": summands,
            "total_ones": ones,
            "mean_summands": opt_f64_json(mean),
            "ones_density": opt_f64_json(density),
        })),
    }
}

pub fn render_table(rows: &[TableRow], fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Plain => {
            let with_companion = rows.iter().any(|r| r.companion_gamma.is_some());
            let mut header = vec!["m", "smallest_part", "gamma"];
            if with_companion {
                header.push("companion_gamma");
            }
            header.push("derived_column");
            let mut grid: Vec<Vec<String>> =
                vec![header.iter().map(|s| s.to_string()).collect()];
            for r in rows {
                let mut line = vec![r.m.to_string(), r.smallest_part.to_string(), dec7(&r.gamma)];
                if with_companion {
                    line.push(
                        r.companion_gamma.as_ref().map_or_else(|| "-".to_string(), dec7),
                    );
                }
                line.push(dec7(&r.derived_column));
                grid.push(line);
            }
            let cols = grid[0].len();
            let widths: Vec<usize> = (0..cols)
                .map(|c| grid.iter().map(|row| row[c].len()).max().unwrap_or(0))
                .collect();
            let mut out = String::new();
            for row in &grid {
                let mut line = String::new();
                for (c, cell) in row.iter().enumerate() {
                    if c > 0 {
                        line.push_str("  ");
                    }
                    line.push_str(&format!("{cell:<width$}", width = widths[c]));
                }
                out.push_str(line.trim_end());
                out.push('\n');
            }
            out
        }
        OutputFormat::Csv => {
            let header = "m,sequence_label,smallest_part,gamma,gamma_error,companion_gamma,companion_error,derived_column,derived_error";
            let mut out = String::from(header);
            out.push('\n');
            for r in rows {
                let row = csv_line(&[
                    r.m.to_string(),
                    r.sequence_label.clone(),
                    r.smallest_part.to_string(),
                    dec7(&r.gamma),
                    dec7(&r.gamma_error),
                    r.companion_gamma.as_ref().map_or_else(String::new, dec7),
                    r.companion_error.as_ref().map_or_else(String::new, dec7),
                    dec7(&r.derived_column),
                    dec7(&r.derived_error),
                ]);
                out.push_str(&row);
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            let mut out = String::new();
            for r in rows {
                out.push_str(&json_line(json!({
                    "m": r.m,
                    "sequence_label": r.sequence_label,
                    "smallest_part": r.smallest_part.to_string(),
                    "gamma": r.gamma.to_f64(),
                    "gamma_error": r.gamma_error.to_f64(),
                    "companion_gamma": r.companion_gamma.as_ref().map(Dyadic::to_f64),
                    "companion_error": r.companion_error.as_ref().map(Dyadic::to_f64),
                    "derived_column": r.derived_column.to_f64(),
                    "derived_error": r.derived_error.to_f64(),
                })));
            }
            out
        }
    }
}

pub fn render_classification(c: &RatioClassification, fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Plain => format!(
            "numerator {}\ndenominator {}\nverdict {}\nroot_ratio {}\ncertified_margin {}\n",
            c.numerator,
            c.denominator,
            c.verdict,
            dec7(&c.root_ratio),
            sci(&c.certified_margin),
        ),
        OutputFormat::Csv => {
            let header = "numerator,denominator,verdict,root_ratio,certified_margin";
            let row = csv_line(&[
                c.numerator.to_string(),
                c.denominator.to_string(),
                c.verdict.to_string(),
                dec7(&c.root_ratio),
                dec7(&c.certified_margin),
            ]);
            format!("{header}\n{row}\n")
        }
        OutputFormat::Json => json_line(json!({
            "numerator": c.numerator.to_string(),
            "denominator": c.denominator.to_string(),
            "verdict": c.verdict.to_string(),
            "root_ratio": c.root_ratio.to_f64(),
            "certified_margin": c.certified_margin.to_f64(),
        })),
    }
}

pub fn render_threshold(spec: &SequenceSpec, threshold: u64, fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Plain => format!("spec {spec}\nthreshold {threshold}\n"),
        OutputFormat::Csv => {
            format!("spec,threshold\n{}\n", csv_line(&[spec.to_string(), threshold.to_string()]))
        }
        OutputFormat::Json => json_line(json!({
            "spec": spec.to_string(),
            "threshold": threshold,
        })),
    }
}

pub fn render_outpace(
    a: &SequenceSpec,
    b: &SequenceSpec,
    horizon: u64,
    index: Option<u64>,
    fmt: OutputFormat,
) -> String {
    let idx_plain = index.map_or_else(|| "none".to_string(), |i| i.to_string());
    match fmt {
        OutputFormat::Plain => {
            format!("a {a}\nb {b}\nhorizon {horizon}\nindex {idx_plain}\n")
        }
        OutputFormat::Csv => {
            let row = csv_line(&[
                a.to_string(),
                b.to_string(),
                horizon.to_string(),
                index.map_or_else(String::new, |i| i.to_string()),
            ]);
            format!("a,b,horizon,index\n{row}\n")
        }
        OutputFormat::Json => json_line(json!({
            "a": a.to_string(),
            "b": b.to_string(),
            "horizon": horizon,
            "index": index,
        })),
    }
}
