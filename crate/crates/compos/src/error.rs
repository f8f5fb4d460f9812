use thiserror::Error;

/// Every failure mode of the library, tagged with a stable machine-readable
/// code (see [`Error::code`]). The CLI maps codes onto exit classes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A sequence spec violates its construction invariants, or spec text
    /// failed to parse. The message includes the byte position for parse
    /// failures.
    #[error("invalid sequence spec: {0}")]
    InvalidSpec(String),

    /// A cut index below the smallest admissible index for the spec kind.
    #[error("cut index {cut} is inadmissible for this spec (minimum {min})")]
    InadmissibleCut { cut: u64, min: u64 },

    /// A polynomial window left the strictly-increasing-positive regime.
    #[error("polynomial window starting at {start} is not strictly increasing and positive")]
    NonIncreasingWindow { start: u64 },

    /// Series evaluation point outside (0, 1).
    #[error("evaluation point {x} outside the open interval (0, 1)")]
    XOutOfRange { x: String },

    /// An index exceeded the range a table or analysis covers.
    #[error("{what} = {got} out of range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        got: u64,
        limit: u64,
    },

    /// The series tail would not fit under the tolerance within the term cap.
    #[error("series tail not converged after {terms} terms (x too close to 1 for this tolerance)")]
    TailNotConverged { terms: u64 },

    /// Certification failed at the maximum permitted working precision.
    #[error("precision exhausted at {cap_bits} mantissa bits while {context}")]
    PrecisionExhausted { cap_bits: u32, context: String },

    /// Root intervals overlap and the exponent streams differ; the caller
    /// must retry with a smaller tolerance.
    #[error("indeterminate comparison: root intervals overlap at tolerance {tol}; retry tighter")]
    Indeterminate { tol: String },

    /// stats_at on an n with no compositions.
    #[error("no compositions of {n} from the given part set")]
    NoCompositions { n: u64 },

    /// Count-table memory guard tripped.
    #[error("count table limit {limit} needs ~{estimate} bytes, over the budget of {budget}")]
    LimitTooLarge {
        limit: u64,
        estimate: u64,
        budget: u64,
    },

    /// brute_force_count guard (exhaustive enumeration is exponential).
    #[error("n = {n} too large for brute-force enumeration (cap {cap})")]
    NTooLarge { n: u64, cap: u64 },

    /// A RootAnalysis was paired with a table for a different series.
    #[error("analysis series does not match table series")]
    MismatchedSeries,

    /// Malformed persisted table dump.
    #[error("table dump parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    /// Stable identifier for the failure class.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidSpec(_) => "INVALID_SPEC",
            Error::InadmissibleCut { .. } => "INADMISSIBLE_CUT",
            Error::NonIncreasingWindow { .. } => "NON_INCREASING_WINDOW",
            Error::XOutOfRange { .. } => "X_OUT_OF_RANGE",
            Error::OutOfRange { .. } => "OUT_OF_RANGE",
            Error::TailNotConverged { .. } => "TAIL_NOT_CONVERGED",
            Error::PrecisionExhausted { .. } => "PRECISION_EXHAUSTED",
            Error::Indeterminate { .. } => "INDETERMINATE",
            Error::NoCompositions { .. } => "NO_COMPOSITIONS",
            Error::LimitTooLarge { .. } => "LIMIT_TOO_LARGE",
            Error::NTooLarge { .. } => "N_TOO_LARGE",
            Error::MismatchedSeries => "MISMATCHED_SERIES",
            Error::Parse { .. } => "PARSE_ERROR",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
