use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid word {token:?}: {reason}")]
    InvalidWord { token: String, reason: &'static str },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate word {word:?} on lines {first_line} and {second_line}")]
    DuplicateWord {
        word: String,
        first_line: usize,
        second_line: usize,
    },

    #[error("word {0:?} is not in the lexicon")]
    UnknownWord(String),

    #[error("lexicon is empty")]
    EmptyLexicon,

    #[error("lexicon has no word other than {0:?}")]
    NoOtherWords(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("word sets differ; only in reports: {only_in_reports:?}, only in observed: {only_in_observed:?}")]
    WordSetMismatch {
        only_in_reports: Vec<String>,
        only_in_observed: Vec<String>,
    },

    #[error("column {column} has zero variance")]
    ZeroVariance { column: &'static str },

    #[error("correlation matrix is singular (condition number {condition:.3e})")]
    Singular { condition: f64 },

    #[error("no convergence after {iterations} iterations; gradient norms {trace:?}")]
    NonConvergence { iterations: usize, trace: Vec<f64> },

    #[error("separation detected after {iterations} iterations (|beta| = {beta_norm:.3e}); gradient norms {trace:?}")]
    Separation {
        iterations: usize,
        beta_norm: f64,
        trace: Vec<f64>,
    },

    #[error("corrected distribution drifted from 100 by {drift:.3e}")]
    RenormalizationDrift { drift: f64 },

    #[error("model invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for failures of a numerical routine (as opposed to bad input data).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. }
                | Error::NonConvergence { .. }
                | Error::Separation { .. }
                | Error::RenormalizationDrift { .. }
        )
    }
}
