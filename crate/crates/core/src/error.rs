//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    /// A cell failed numeric parsing. `row` is the 1-based data row
    /// (excluding the header).
    #[error("row {row}, column `{column}`: {message}")]
    Cell {
        row: usize,
        column: String,
        message: String,
    },

    #[error("file has a header but no rows")]
    EmptyTable,

    #[error("duplicate (state, year) key: ({state}, {year})")]
    DuplicateKey { state: String, year: i32 },

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("label `{label}` for ({state}, {year}) is {value}; polarization indices must be > 0")]
    NonPositiveLabel {
        state: String,
        year: i32,
        label: String,
        value: f64,
    },

    #[error("table has no {0} labels")]
    MissingLabels(String),

    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("`{name}` is constant; correlation is undefined")]
    ConstantInput { name: String },

    #[error("feature `{feature}`: {source}")]
    FeatureContext {
        feature: String,
        #[source]
        source: Box<Error>,
    },

    #[error("train fraction {0} must lie strictly inside (0, 1)")]
    InvalidFraction(f64),

    #[error("table with {rows} rows cannot be split into non-empty train and validation sets")]
    TableTooSmall { rows: usize },

    #[error("matrix has {actual} columns, expected {expected}")]
    ColumnCountMismatch { expected: usize, actual: usize },

    #[error("dimension mismatch: model expects {expected} features, input has {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("design matrix is rank deficient; dependent column(s): {columns:?}")]
    SingularMatrix { columns: Vec<usize> },

    #[error("residual variance is zero (perfect fit); coefficient p-values are undefined")]
    DegenerateFit,

    #[error("solver did not converge; worst remaining KKT violation {violation:e}")]
    NonConvergence { violation: f64 },

    #[error("all paired differences are zero; the signed-rank test is undefined")]
    AllZeroDifferences,

    #[error("signed-rank statistic {w} outside [0, {max}] for n_eff = {n_eff}")]
    StatisticOutOfRange { w: f64, max: f64, n_eff: usize },

    #[error("training loss became non-finite at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },

    #[error("validation set is empty")]
    EmptyValidation,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("training failed: {0}")]
    TrainingFailed(String),

    #[error("model file error: {0}")]
    ModelFormat(String),
}

impl Error {
    /// Attach a feature name to a correlation error so callers can tell
    /// which column was at fault.
    pub fn for_feature(self, feature: &str) -> Error {
        Error::FeatureContext {
            feature: feature.to_string(),
            source: Box::new(self),
        }
    }

    /// True for errors caused by bad inputs or configuration (as opposed
    /// to failures that arise while fitting models).
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::SingularMatrix { .. }
                | Error::DegenerateFit
                | Error::NonConvergence { .. }
                | Error::NonFiniteLoss { .. }
                | Error::AllZeroDifferences
                | Error::TrainingFailed(_)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runtime_failures_are_not_validation_errors() {
        assert!(!Error::SingularMatrix { columns: vec![1] }.is_validation());
        assert!(!Error::NonConvergence { violation: 0.5 }.is_validation());
        assert!(!Error::NonFiniteLoss { epoch: 3 }.is_validation());
        assert!(!Error::TrainingFailed("all cells failed".into()).is_validation());
        assert!(Error::EmptyTable.is_validation());
        assert!(Error::InvalidFraction(2.0).is_validation());
        assert!(Error::SchemaMismatch("x".into()).is_validation());
    }
}
