//! Argument grammar, config resolution, command dispatch, and the
//! exit-code contract: 0 success, 1 failed `--check-paper` verification,
//! 2 usage/parse/config, 3 numerical indeterminacy, 4 domain precondition.

use std::ffi::OsString;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use compos::{
    build_count_table_with_budget, build_table_fibonacci, build_table_polynomial,
    certified_fibonacci_threshold, classify_plrs_vs_fibonacci, classify_ratio,
    find_root_with_cap, outpacing_index, reference, Error, RestrictedSeries, SequenceSpec,
    TableRow,
};

use crate::config::{self, CliConfig, ConfigOverlay};
use crate::render;

/// Captured result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser)]
#[command(
    name = "compos",
    version,
    about = "Certified asymptotics of compositions with restricted parts",
    disable_help_subcommand = true
)]
struct Cli {
    /// Absolute tolerance for root isolation, e.g. 1e-12.
    #[arg(long, global = true, value_name = "REAL")]
    tol: Option<String>,

    /// Output format: plain, csv, or json.
    #[arg(long, global = true, value_name = "FMT")]
    format: Option<String>,

    /// Largest count-table length a command may request.
    #[arg(long, global = true, value_name = "N")]
    limit: Option<u64>,

    /// Config file with flat `key = value` lines.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Isolate the root of a restricted series and derive its constants.
    Root {
        /// Part sequence: fib, plrs:c1,...,cL, or poly:a_s,...,a_0.
        spec: String,
        /// Cut index: parts below the m-th sequence value are forbidden.
        m: u64,
    },
    /// Exact composition counts and summand statistics at one n.
    Count {
        spec: String,
        m: u64,
        /// Target integer being composed.
        n: u64,
    },
    /// Reproduce a report table: `fib <m_from> <m_to>` or `poly <spec> <m,...>`.
    Table {
        /// Table kind: fib or poly.
        which: String,
        /// Kind-specific arguments (see command description).
        args: Vec<String>,
        /// Compare against the published table values instead of printing.
        #[arg(long)]
        check_paper: bool,
    },
    /// Classify the limit of the count ratio numerator/denominator at cut m.
    Compare {
        numerator: String,
        m: u64,
        denominator: String,
    },
    /// Certified index from which the Fibonacci numbers exceed a polynomial.
    Threshold { spec: String },
    /// First index from which sequence `a` permanently outpaces `b`.
    Outpace { a: String, b: String, horizon: u64 },
}

/// Runs the CLI on the given argument list (element 0 is the binary name)
/// and captures the outcome. Reads the process environment for `COMPOS_*`
/// overrides.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let code = u8::try_from(e.exit_code()).unwrap_or(2);
            return if code == 0 {
                Outcome { code: 0, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let cfg = match resolve_config(&cli) {
        Ok(cfg) => cfg,
        Err(msg) => return Outcome { code: 2, stdout: String::new(), stderr: format!("{msg}\n") },
    };
    match dispatch(&cli.command, &cfg) {
        Ok((stdout, code)) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => Outcome {
            code: exit_code_for(&e),
            stdout: String::new(),
            stderr: format!("error[{}]: {e}\n", e.code()),
        },
    }
}

/// Defaults, then config file, then environment, then flags.
fn resolve_config(cli: &Cli) -> Result<CliConfig, String> {
    let mut cfg = CliConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("config error: cannot read {}: {e}", path.display()))?;
        cfg = cfg.with_overlay(&config::parse_config_text(&text).map_err(|e| e.to_string())?);
    }
    cfg = cfg
        .with_overlay(&config::overlay_from_env(|k| std::env::var(k).ok()).map_err(|e| e.to_string())?);
    let mut flags = ConfigOverlay::default();
    if let Some(t) = &cli.tol {
        flags.abs_tol =
            Some(config::parse_tolerance(t).map_err(|m| format!("config error: --tol: {m}"))?);
    }
    if let Some(f) = &cli.format {
        flags.output_format =
            Some(f.parse().map_err(|m| format!("config error: --format: {m}"))?);
    }
    if let Some(l) = cli.limit {
        if l == 0 {
            return Err("config error: --limit must be positive".into());
        }
        flags.table_limit = Some(l);
    }
    Ok(cfg.with_overlay(&flags))
}

fn exit_code_for(e: &Error) -> u8 {
    match e.code() {
        "INVALID_SPEC" | "PARSE_ERROR" => 2,
        "INDETERMINATE" | "PRECISION_EXHAUSTED" | "TAIL_NOT_CONVERGED" => 3,
        _ => 4,
    }
}

fn dispatch(cmd: &Command, cfg: &CliConfig) -> compos::Result<(String, u8)> {
    match cmd {
        Command::Root { spec, m } => cmd_root(spec, *m, cfg).map(|s| (s, 0)),
        Command::Count { spec, m, n } => cmd_count(spec, *m, *n, cfg).map(|s| (s, 0)),
        Command::Table { which, args, check_paper } => cmd_table(which, args, *check_paper, cfg),
        Command::Compare { numerator, m, denominator } => {
            cmd_compare(numerator, *m, denominator, cfg).map(|s| (s, 0))
        }
        Command::Threshold { spec } => cmd_threshold(spec, cfg).map(|s| (s, 0)),
        Command::Outpace { a, b, horizon } => cmd_outpace(a, b, *horizon, cfg).map(|s| (s, 0)),
    }
}

fn cmd_root(spec: &str, m: u64, cfg: &CliConfig) -> compos::Result<String> {
    let spec = SequenceSpec::from_str(spec)?;
    let series = RestrictedSeries::new(spec, m)?;
    let analysis = find_root_with_cap(&series, &cfg.abs_tol, cfg.precision_cap_bits)?;
    Ok(render::render_root(&analysis, cfg.output_format))
}

fn cmd_count(spec: &str, m: u64, n: u64, cfg: &CliConfig) -> compos::Result<String> {
    let spec = SequenceSpec::from_str(spec)?;
    let series = RestrictedSeries::new(spec, m)?;
    if n > cfg.table_limit {
        return Err(Error::OutOfRange { what: "n", got: n, limit: cfg.table_limit });
    }
    let table = build_count_table_with_budget(&series, n, cfg.memory_budget_bytes)?;
    let stats = match table.stats_at(n) {
        Ok(s) => Some(s),
        Err(Error::NoCompositions { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(render::render_stats(&series, n, stats.as_ref(), cfg.output_format))
}

fn parse_cut(text: &str) -> compos::Result<u64> {
    text.parse().map_err(|_| {
        Error::InvalidSpec(format!("expected a non-negative integer cut index, got {text:?}"))
    })
}

/// Accepts the monomial shorthand `k<d>` (e.g. `k4`) alongside full spec
/// text, mirroring the table column labels.
fn parse_poly_arg(text: &str) -> compos::Result<SequenceSpec> {
    if let Some(rest) = text.strip_prefix('k') {
        if let Ok(degree) = rest.parse::<u32>() {
            return SequenceSpec::monomial(degree);
        }
    }
    SequenceSpec::from_str(text)
}

fn cmd_table(
    which: &str,
    args: &[String],
    check_paper: bool,
    cfg: &CliConfig,
) -> compos::Result<(String, u8)> {
    match which {
        "fib" => {
            let [from, to] = args else {
                return Err(Error::InvalidSpec(format!(
                    "table fib expects `<m_from> <m_to>`, got {} argument(s)",
                    args.len()
                )));
            };
            let rows = build_table_fibonacci(parse_cut(from)?, parse_cut(to)?, &cfg.abs_tol)?;
            if check_paper {
                let (report, deviations) = check_table1(&rows);
                Ok((report, u8::from(deviations > 0)))
            } else {
                Ok((render::render_table(&rows, cfg.output_format), 0))
            }
        }
        "poly" => {
            let [spec_text, list] = args else {
                return Err(Error::InvalidSpec(format!(
                    "table poly expects `<spec> <m1,m2,...>`, got {} argument(s)",
                    args.len()
                )));
            };
            let spec = parse_poly_arg(spec_text)?;
            let m_values = list.split(',').map(parse_cut).collect::<compos::Result<Vec<_>>>()?;
            let rows = build_table_polynomial(&spec, &m_values, &cfg.abs_tol)?;
            if check_paper {
                let degree = match &spec {
                    SequenceSpec::Polynomial { coeffs } => (coeffs.len() - 1) as u32,
                    _ => unreachable!("build_table_polynomial accepted the spec"),
                };
                Ok((check_table2(&rows, degree), 0))
            } else {
                Ok((render::render_table(&rows, cfg.output_format), 0))
            }
        }
        other => Err(Error::InvalidSpec(format!(
            "unknown table kind {other:?}: expected `fib` or `poly`"
        ))),
    }
}

/// Compares recomputed Fibonacci-table rows against the published values at
/// the print precision (±1e-6). The published mean-slope at m = 2 has a
/// digit slip; a recomputed value matching the corrected figure is accepted
/// and reported as `corrected` rather than counted as a deviation.
fn check_table1(rows: &[TableRow]) -> (String, usize) {
    let mut out = String::new();
    let mut deviations = 0usize;
    for row in rows {
        let Some(r) = reference::TABLE1.iter().find(|r| r.m == row.m) else {
            out.push_str(&format!("m={} (no reference)\n", row.m));
            continue;
        };
        let alpha_status = if reference::matches_printed(&row.gamma, r.alpha, 10) {
            "ok"
        } else {
            deviations += 1;
            "DEVIATES"
        };
        let slope_status = if reference::matches_printed(&row.derived_column, r.slope, 10) {
            "ok"
        } else if row.m == 2
            && reference::matches_printed(
                &row.derived_column,
                reference::TABLE1_SLOPE_M2_CORRECTED,
                10,
            )
        {
            "corrected"
        } else {
            deviations += 1;
            "DEVIATES"
        };
        out.push_str(&format!("m={} alpha {alpha_status} slope {slope_status}\n", row.m));
    }
    out.push_str(&format!("table1 check: {} rows, {deviations} deviations\n", rows.len()));
    (out, deviations)
}

/// Compares recomputed polynomial-table rows against the published values.
/// Discrepancies are flagged, never fatal: several published rows are
/// internally inconsistent (see the reference module), and the point of the
/// check is to display recomputed and printed values side by side.
fn check_table2(rows: &[TableRow], degree: u32) -> String {
    let mut out = String::new();
    let mut flagged = 0usize;
    for row in rows {
        let Some(r) =
            reference::TABLE2.iter().find(|r| r.m == row.m && r.degree == degree)
        else {
            out.push_str(&format!("m={} d={degree} (no reference)\n", row.m));
            continue;
        };
        let companion =
            row.companion_gamma.as_ref().expect("polynomial rows carry a Fibonacci companion");
        let alpha_ok = reference::matches_printed(companion, r.alpha, 10);
        let gamma_ok = reference::matches_printed(&row.gamma, r.gamma, 10);
        let ratio_ok = reference::matches_printed(&row.derived_column, r.ratio, 10);
        if !(alpha_ok && gamma_ok && ratio_ok) {
            flagged += 1;
        }
        let status = |ok: bool| if ok { "ok" } else { "FLAGGED" };
        out.push_str(&format!(
            "m={} d={degree} alpha {} gamma {} ratio {}\n",
            row.m,
            status(alpha_ok),
            status(gamma_ok),
            status(ratio_ok),
        ));
    }
    out.push_str(&format!("table2 check: {} rows, {flagged} flagged\n", rows.len()));
    out
}

fn cmd_compare(num: &str, m: u64, den: &str, cfg: &CliConfig) -> compos::Result<String> {
    let num_spec = SequenceSpec::from_str(num)?;
    let den_spec = SequenceSpec::from_str(den)?;
    // Comparisons against the Fibonacci baseline use the value-aligned
    // classifier so that reindexed spellings of the same sequence come out
    // FINITE_POSITIVE; everything else is a same-cut root comparison,
    // retried at tighter tolerances before indeterminacy is surfaced.
    let classification = if den_spec == SequenceSpec::Fibonacci
        && !matches!(num_spec, SequenceSpec::Polynomial { .. })
    {
        classify_plrs_vs_fibonacci(&num_spec, m)?
    } else {
        let mut tol = cfg.abs_tol.clone();
        let mut found = None;
        let mut last = None;
        for _ in 0..3 {
            let numerator = RestrictedSeries::new(num_spec.clone(), m)?;
            let denominator = RestrictedSeries::new(den_spec.clone(), m)?;
            match classify_ratio(numerator, denominator, &tol) {
                Err(e @ Error::Indeterminate { .. }) => {
                    last = Some(e);
                    tol = tol.scale2(-30);
                }
                other => {
                    found = Some(other?);
                    break;
                }
            }
        }
        match found {
            Some(c) => c,
            None => return Err(last.expect("at least one attempt ran")),
        }
    };
    Ok(render::render_classification(&classification, cfg.output_format))
}

fn cmd_threshold(spec: &str, cfg: &CliConfig) -> compos::Result<String> {
    let spec = SequenceSpec::from_str(spec)?;
    let threshold = certified_fibonacci_threshold(&spec)?;
    Ok(render::render_threshold(&spec, threshold, cfg.output_format))
}

fn cmd_outpace(a: &str, b: &str, horizon: u64, cfg: &CliConfig) -> compos::Result<String> {
    let a = SequenceSpec::from_str(a)?;
    let b = SequenceSpec::from_str(b)?;
    let index = outpacing_index(&a, &b, horizon)?;
    Ok(render::render_outpace(&a, &b, horizon, index, cfg.output_format))
}
