//! Certified asymptotics for integer compositions with restricted parts.
//!
//! Fix a strictly increasing sequence of positive integers H (Fibonacci
//! numbers, a positive linear recurrence sequence, or the values of an
//! integer polynomial) and a cut index m, and count the compositions of n
//! whose parts all come from {H_i : i ≥ m}. The count c(n) obeys
//!
//! ```text
//! c(n) ~ (1/S′(γ)) · γ^{−n−1},        S(x) = Σ_{i≥m} x^{H_i},
//! ```
//!
//! where γ is the unique root of S(x) = 1 in (0, 1), and the mean number of
//! summands in a random composition of n grows like n/(γ·S′(γ)). This crate
//! computes γ, S′(γ), and the two derived constants with certified error
//! bounds (directed-rounding dyadic arithmetic throughout), cross-validates
//! them against exact big-integer counting tables, and classifies the limit
//! of count ratios between different part sequences.
//!
//! Entry points:
//! - [`spec::SequenceSpec`] / [`series::RestrictedSeries`] describe part sets;
//! - [`root::find_root`] certifies γ and the asymptotic constants;
//! - [`count`] builds exact dynamic-programming count tables and statistics;
//! - [`compare`] classifies cross-sequence count-ratio limits;
//! - [`table_io`] persists count tables in a versioned text format.

pub mod compare;
pub mod count;
pub mod dyadic;
pub mod error;
pub mod reference;
pub mod root;
pub mod series;
pub mod spec;
pub mod table_io;

pub use compare::{
    build_table_fibonacci, build_table_polynomial, classify_plrs_vs_fibonacci, classify_ratio,
    RatioClassification, TableRow, Verdict,
};
pub use count::{
    asymptotic_residual, brute_force_count, build_count_table, build_count_table_with_budget,
    CountTable, Stats,
};
pub use dyadic::{Dyadic, Interval, Round};
pub use error::{Error, Result};
pub use root::{find_root, find_root_with_cap, root_sequence, RootAnalysis};
pub use series::{
    evaluate_series, evaluate_series_derivative, evaluate_series_derivative_with_cap,
    evaluate_series_with_cap, CertifiedValue, Exponents, RestrictedSeries,
    DEFAULT_PRECISION_BITS, DEFAULT_PRECISION_CAP, TERM_CAP,
};
pub use spec::{
    certified_fibonacci_threshold, fibonacci_number, generate_terms, min_admissible_index,
    outpacing_index, SequenceSpec, SequenceWindow,
};
