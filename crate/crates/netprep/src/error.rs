//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by any netprep operation.
#[derive(Error, Debug)]
pub enum Error {
    /// Syntax or semantic problem in an input file, with a 1-based line number.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A feature name was requested that the dataset does not declare.
    /// NSL-KDD schemas sometimes spell preset members differently
    /// (e.g. "error_rate"); rename the column or use a custom set.
    #[error("unknown feature {0:?} (rename the column or supply a custom feature set with matching names)")]
    UnknownFeature(String),

    #[error("dataset has no instances")]
    EmptyDataset,

    #[error("column is empty")]
    EmptyColumn,

    #[error("bin count must be at least 1, got {0}")]
    InvalidBins(usize),

    #[error("histogram has no nonzero counts")]
    EmptyHistogram,

    #[error("need at least {required} values, got {actual}")]
    TooFewValues { required: usize, actual: usize },

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("no classifiers configured")]
    NoClassifiers,

    #[error("no run record for feature {feature:?} under classifier {classifier}")]
    MissingRun { feature: String, classifier: String },

    #[error("feature {0:?} has no fitted transform")]
    MissingTransform(String),

    #[error("nominal feature {feature:?} has an empty domain")]
    EmptyDomain { feature: String },

    #[error("no number assigned for symbol {symbol:?} of feature {feature:?}")]
    UnmappedSymbol { feature: String, symbol: String },

    #[error("malformed dataset variant name {0:?}")]
    BadVariantName(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
