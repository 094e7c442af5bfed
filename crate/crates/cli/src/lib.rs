//! File formats, command implementations and benchmarks behind the
//! `algmatch` binary.

pub mod bench;
pub mod commands;
pub mod format;
pub mod report;

use algmatch::field::FieldError;
use algmatch::matroid::MatroidError;
use algmatch::pathmatch::PathMatchError;
use thiserror::Error;

pub use format::ParseError;
pub use report::RunReport;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("inputs use different primes")]
    FieldMismatch,
    #[error("invalid input: {0}")]
    Invalid(String),
    /// The instance has no basic path-matching; a report is still produced.
    #[error("no basic path-matching")]
    NoBpm(Box<RunReport>),
    #[error("result disagrees with the reference oracle")]
    OracleMismatch(Box<RunReport>),
    #[error("no verified result after {0} randomized attempts")]
    RandomnessExhausted(u32),
    #[error("independent verification failed: {0}")]
    Unverified(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NoBpm(_) => 2,
            CliError::OracleMismatch(_) => 3,
            CliError::Parse(_) | CliError::FieldMismatch | CliError::Invalid(_) => 4,
            CliError::RandomnessExhausted(_) => 5,
            CliError::Io { .. } | CliError::Unverified(_) | CliError::Internal(_) => 1,
        }
    }

    /// The report attached to errors that still describe a completed run.
    pub fn report(&self) -> Option<&RunReport> {
        match self {
            CliError::NoBpm(r) | CliError::OracleMismatch(r) => Some(r),
            _ => None,
        }
    }
}

impl From<PathMatchError> for CliError {
    fn from(e: PathMatchError) -> Self {
        match e {
            PathMatchError::FieldMismatch => CliError::FieldMismatch,
            PathMatchError::RandomnessExhausted { attempts } => CliError::RandomnessExhausted(attempts),
            PathMatchError::DimensionMismatch(_)
            | PathMatchError::RankDeficientMatroid { .. }
            | PathMatchError::InvalidEdge(..)
            | PathMatchError::BadAlpha(_) => CliError::Invalid(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<MatroidError> for CliError {
    fn from(e: MatroidError) -> Self {
        match e {
            MatroidError::FieldMismatch => CliError::FieldMismatch,
            MatroidError::RandomnessExhausted { attempts } => CliError::RandomnessExhausted(attempts),
            MatroidError::DimensionMismatch(_) => CliError::Invalid(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::Invalid(e.to_string())
    }
}
