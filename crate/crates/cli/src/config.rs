//! Configuration model: defaults, config-file text, environment variables,
//! and command-line flags, merged in that order (later layers win).

use std::fmt;
use std::str::FromStr;

use compos::{Dyadic, DEFAULT_PRECISION_CAP};

/// Output renderings understood by every command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Plain,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plain" => Ok(OutputFormat::Plain),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format {other:?}: expected plain, csv, or json")),
        }
    }
}

/// Fully resolved runtime configuration.
#[derive(Debug, Clone)]
pub struct CliConfig {
    /// Absolute tolerance for root isolation; must lie in (0, 1).
    pub abs_tol: Dyadic,
    /// Hard ceiling on working precision during escalation.
    pub precision_cap_bits: u32,
    /// Largest count-table length a single command may request.
    pub table_limit: u64,
    pub output_format: OutputFormat,
    /// Budget for count-table storage, enforced before allocation.
    pub memory_budget_bytes: u64,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            abs_tol: Dyadic::from_f64(1e-9),
            precision_cap_bits: DEFAULT_PRECISION_CAP,
            table_limit: 2000,
            output_format: OutputFormat::Plain,
            memory_budget_bytes: 1 << 30,
        }
    }
}

/// A partial configuration from one source (file, environment, or flags).
#[derive(Debug, Clone, Default)]
pub struct ConfigOverlay {
    pub abs_tol: Option<Dyadic>,
    pub precision_cap_bits: Option<u32>,
    pub table_limit: Option<u64>,
    pub output_format: Option<OutputFormat>,
    pub memory_budget_bytes: Option<u64>,
}

impl CliConfig {
    /// Applies an overlay; set fields replace the current values.
    pub fn with_overlay(mut self, overlay: &ConfigOverlay) -> Self {
        if let Some(v) = &overlay.abs_tol {
            self.abs_tol = v.clone();
        }
        if let Some(v) = overlay.precision_cap_bits {
            self.precision_cap_bits = v;
        }
        if let Some(v) = overlay.table_limit {
            self.table_limit = v;
        }
        if let Some(v) = overlay.output_format {
            self.output_format = v;
        }
        if let Some(v) = overlay.memory_budget_bytes {
            self.memory_budget_bytes = v;
        }
        self
    }
}

/// A configuration problem, reported with its source location. `line` is
/// zero when the value did not come from a config file (environment or
/// command line).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "config error at line {}: {}", self.line, self.msg)
        } else {
            write!(f, "config error: {}", self.msg)
        }
    }
}

impl std::error::Error for ConfigError {}

/// Parses an absolute tolerance: any decimal or scientific literal in (0, 1).
pub fn parse_tolerance(s: &str) -> Result<Dyadic, String> {
    let v: f64 = s
        .parse()
        .map_err(|_| format!("expected a real number for abs_tol, got {s:?}"))?;
    if !(v > 0.0 && v < 1.0) {
        return Err(format!("abs_tol must lie strictly between 0 and 1, got {s}"));
    }
    Ok(Dyadic::from_f64(v))
}

fn parse_positive<T: FromStr + PartialOrd + From<u8>>(key: &str, s: &str) -> Result<T, String> {
    let v: T = s
        .parse()
        .map_err(|_| format!("expected a positive integer for {key}, got {s:?}"))?;
    if v < T::from(1u8) {
        return Err(format!("{key} must be positive"));
    }
    Ok(v)
}

fn set_key(overlay: &mut ConfigOverlay, key: &str, value: &str) -> Result<(), String> {
    match key {
        "abs_tol" => overlay.abs_tol = Some(parse_tolerance(value)?),
        "precision_cap_bits" => {
            overlay.precision_cap_bits = Some(parse_positive::<u32>(key, value)?)
        }
        "table_limit" => overlay.table_limit = Some(parse_positive::<u64>(key, value)?),
        "output_format" => overlay.output_format = Some(value.parse()?),
        "memory_budget_bytes" => {
            overlay.memory_budget_bytes = Some(parse_positive::<u64>(key, value)?)
        }
        other => return Err(format!("unknown configuration key {other:?}")),
    }
    Ok(())
}

/// Parses flat `key = value` config text. Blank lines and `#` comments are
/// ignored; unknown keys are rejected; a repeated key keeps the last value.
pub fn parse_config_text(text: &str) -> Result<ConfigOverlay, ConfigError> {
    let mut overlay = ConfigOverlay::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(ConfigError {
                line,
                msg: format!("expected `key = value`, got {trimmed:?}"),
            });
        };
        set_key(&mut overlay, key.trim(), value.trim()).map_err(|msg| ConfigError { line, msg })?;
    }
    Ok(overlay)
}

/// Keys recognized in config files, also consulted as `COMPOS_<KEY>`
/// environment variables (upper-cased).
pub const CONFIG_KEYS: [&str; 5] = [
    "abs_tol",
    "precision_cap_bits",
    "table_limit",
    "output_format",
    "memory_budget_bytes",
];

/// Builds an overlay from environment variables via the supplied lookup
/// (injected so tests need not mutate the process environment).
pub fn overlay_from_env(
    lookup: impl Fn(&str) -> Option<String>,
) -> Result<ConfigOverlay, ConfigError> {
    let mut overlay = ConfigOverlay::default();
    for key in CONFIG_KEYS {
        let var = format!("COMPOS_{}", key.to_ascii_uppercase());
        if let Some(value) = lookup(&var) {
            set_key(&mut overlay, key, value.trim())
                .map_err(|msg| ConfigError { line: 0, msg: format!("{var}: {msg}") })?;
        }
    }
    Ok(overlay)
}
