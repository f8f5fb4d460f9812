//! Command-line plumbing for the `compos` binary: configuration layering,
//! output rendering, and command dispatch, kept in a library so the pieces
//! are unit-testable and fuzzable.
//!
//! The exit-code contract is: 0 success, 1 failed `--check-paper`
//! verification, 2 usage/parse/config problems, 3 numerical indeterminacy
//! (the certified enclosures could not decide within the precision cap),
//! 4 violated domain preconditions.

mod commands;
pub mod config;
pub mod render;

pub use commands::{run, Outcome};
pub use config::{
    overlay_from_env, parse_config_text, parse_tolerance, CliConfig, ConfigError, ConfigOverlay,
    OutputFormat, CONFIG_KEYS,
};
