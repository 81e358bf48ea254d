//! Regression and model-comparison toolkit for state-year panel data.
//!
//! The crate covers the full pipeline from delimited panel files to
//! chamber-level polarization predictions:
//!
//! - [`dataset`] — table ingestion, seeded train/validation splitting, and
//!   min-max feature scaling.
//! - [`stats`] — Pearson/Spearman correlation with tie handling, the
//!   rank-gap non-linearity flag, threshold feature selection, and the
//!   Wilcoxon signed-rank test under a normal approximation.
//! - [`models`] — three regressors behind one predict contract: ordinary
//!   least squares (Householder QR), RBF-kernel support vector regression
//!   (SMO), and a small feedforward network trained with Adam; plus
//!   exhaustive hyperparameter grid search.
//! - [`evaluation`] — RMSE scoring, argmin model selection, pairwise
//!   Wilcoxon comparison tables, and unlabeled-year prediction export.
//!
//! All values are plain `f64` structures that are immutable once built, so
//! they can be shared freely across worker threads. Every random choice is
//! drawn from a named sub-stream of a single caller-provided seed (see
//! [`rng`]), which makes full pipeline runs replayable.

pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod matrix;
pub mod models;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use matrix::Matrix;
