use std::fmt;

/// Errors produced by configuration parsing, coefficient derivation, and the
/// special-function and outage evaluators.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A structural problem with an evaluator input: non-integer pole offsets
    /// where integers are required, overlapping pole sets, unsupported pole
    /// orders, and similar.
    InvalidSpec(String),
    /// An argument outside the mathematical domain of the requested function.
    Domain(String),
    /// An iterative evaluation failed to settle within its budget.
    NonConvergence {
        what: String,
        terms_used: usize,
        last_estimate: f64,
    },
    /// A probability landed outside [0, 1] by more than the tolerance slack.
    Range { what: String, value: f64 },
    /// A model parameter failed validation (shape < 1, negative scale, ...).
    Parameter(String),
    /// A malformed or incomplete run configuration.
    Config(String),
    /// An asymptotic coefficient was requested for the wrong diversity case.
    CaseMismatch { expected: String, got: String },
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpec(msg) => write!(f, "invalid evaluator input: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NonConvergence {
                what,
                terms_used,
                last_estimate,
            } => write!(
                f,
                "{what} failed to converge after {terms_used} terms (last estimate {last_estimate:e})"
            ),
            Error::Range { what, value } => {
                write!(f, "{what} = {value:e} lies outside [0, 1]")
            }
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::CaseMismatch { expected, got } => {
                write!(f, "asymptotic case mismatch: expected {expected}, got {got}")
            }
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
