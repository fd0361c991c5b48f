//! Crate-wide error type.
//!
//! Every contract violation in the library surfaces as one of these variants.
//! The CLI prints [`Error::name`] and exits with status 1.

use std::path::PathBuf;

/// Errors returned by this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A NaN or infinite value was found where only finite values are allowed.
    #[error("non-finite value {value} at position {position}")]
    NonFiniteValue {
        /// Zero-based index of the first offending element.
        position: usize,
        /// The offending value.
        value: f64,
    },

    /// Missing values remained after interpolation under the `Raise` mode.
    #[error("missing values remain after interpolation at positions {positions:?}")]
    ResidualMissing {
        /// Positions still holding NaN.
        positions: Vec<usize>,
    },

    /// The series has no finite value at all.
    #[error("series contains no finite value")]
    AllMissing,

    /// An exogenous matrix does not cover the index range it must cover.
    #[error("coverage error: {0}")]
    CoverageError(String),

    /// Two indexed objects use different sampling frequencies.
    #[error("frequency mismatch: {left} vs {right}")]
    FrequencyMismatch {
        /// Frequency of the left operand.
        left: String,
        /// Frequency of the right operand.
        right: String,
    },

    /// A timestamp does not lie on the index grid.
    #[error("timestamp {0} is not on the index grid")]
    OffGridTimestamp(String),

    /// The same timestamp appears twice in source data.
    #[error("duplicate timestamp {0}")]
    DuplicateTimestamp(String),

    /// A column name appears more than once.
    #[error("duplicate column '{0}'")]
    DuplicateColumn(String),

    /// Not enough observations for the requested operation.
    #[error("series too short: {0}")]
    TooShort(String),

    /// A fitted transformer state does not match the data it is applied to.
    #[error("state mismatch: {0}")]
    StateMismatch(String),

    /// Matrix/vector dimensions disagree.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch {
        /// Expected size.
        expected: usize,
        /// Actual size.
        actual: usize,
    },

    /// The normal equations are numerically singular.
    #[error("singular system (condition estimate {condition:e})")]
    SingularSystem {
        /// 1-norm condition estimate of the normal matrix (infinite when a pivot vanished).
        condition: f64,
    },

    /// Exogenous rows are not aligned with the target index.
    #[error("alignment error: {0}")]
    AlignmentError(String),

    /// The model was fitted with exogenous features but none were supplied.
    #[error("model was fitted with {0} exogenous columns but none were supplied")]
    ExogMissing(usize),

    /// Supplied exogenous features do not match the fitted column contract.
    #[error("exogenous shape mismatch: {0}")]
    ExogShape(String),

    /// Bootstrap intervals need in-sample residuals.
    #[error("forecaster has no in-sample residuals")]
    NoResiduals,

    /// Two sequences that must be the same length are not.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch {
        /// Length of the first sequence.
        left: usize,
        /// Length of the second sequence.
        right: usize,
    },

    /// A metric denominator is zero.
    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    /// Unknown metric name.
    #[error("unknown metric '{0}'")]
    MetricUnknown(String),

    /// A parameter is outside its valid domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Filesystem failure.
    #[error("i/o error on {path}: {source}")]
    Io {
        /// Path being accessed.
        path: PathBuf,
        /// Underlying error.
        #[source]
        source: std::io::Error,
    },

    /// Malformed input document.
    #[error("parse error: {0}")]
    ParseError(String),

    /// The model file's self hash does not match its content.
    #[error("hash mismatch: stored {stored}, computed {computed}")]
    HashMismatch {
        /// Hash recorded in the file.
        stored: String,
        /// Hash recomputed from the payload.
        computed: String,
    },

    /// The model file uses a format version this build cannot read.
    #[error("unsupported model format version '{0}'")]
    UnsupportedVersion(String),

    /// A CPE component is empty or malformed.
    #[error("invalid CPE component: {0}")]
    InvalidComponent(String),
}

impl Error {
    /// Stable variant name, printed by the CLI on failure.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonFiniteValue { .. } => "NonFiniteValue",
            Error::ResidualMissing { .. } => "ResidualMissing",
            Error::AllMissing => "AllMissing",
            Error::CoverageError(_) => "CoverageError",
            Error::FrequencyMismatch { .. } => "FrequencyMismatch",
            Error::OffGridTimestamp(_) => "OffGridTimestamp",
            Error::DuplicateTimestamp(_) => "DuplicateTimestamp",
            Error::DuplicateColumn(_) => "DuplicateColumn",
            Error::TooShort(_) => "TooShort",
            Error::StateMismatch(_) => "StateMismatch",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::SingularSystem { .. } => "SingularSystem",
            Error::AlignmentError(_) => "AlignmentError",
            Error::ExogMissing(_) => "ExogMissing",
            Error::ExogShape(_) => "ExogShape",
            Error::NoResiduals => "NoResiduals",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::ZeroDenominator(_) => "ZeroDenominator",
            Error::MetricUnknown(_) => "MetricUnknown",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Io { .. } => "IoError",
            Error::ParseError(_) => "ParseError",
            Error::HashMismatch { .. } => "HashMismatch",
            Error::UnsupportedVersion(_) => "UnsupportedVersion",
            Error::InvalidComponent(_) => "InvalidComponent",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
