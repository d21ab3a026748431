use thiserror::Error;

/// Errors produced by this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,

    #[error("observation {index} is negative ({value})")]
    NegativeValue { index: usize, value: f64 },

    #[error("observation {index} is not finite")]
    NonFinite { index: usize },

    #[error("sample size {n} exceeds the enumeration limit {max}")]
    SampleTooLarge { n: usize, max: usize },

    #[error("{what} must be at least 1")]
    ZeroCount { what: &'static str },

    #[error("simulation work n*reps = {requested} exceeds budget {budget}")]
    BudgetExceeded { requested: u64, budget: u64 },

    #[error("alpha = {0} is outside (0, 1)")]
    InvalidAlpha(f64),

    #[error("unknown distribution family `{0}`")]
    UnknownFamily(String),

    #[error("invalid family specification `{0}`")]
    InvalidFamilySpec(String),

    #[error("parameter {theta} is outside the valid range {range} for {family}")]
    ThetaOutOfRange {
        family: String,
        theta: f64,
        range: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("no efficiency route applies to {0}")]
    Inapplicable(String),

    #[error("line {line}: cannot parse `{token}` as a number")]
    Parse { line: usize, token: String },

    #[error("malformed table: {0}")]
    Table(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
