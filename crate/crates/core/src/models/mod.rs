//! The three regressors behind one train/predict contract.

pub mod grid;
pub mod mlp;
pub mod ols;
pub mod svr;

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use grid::{grid_search, GridCellOutcome, GridSearchResult, MlpGrid, SvrGrid};
pub use mlp::{loss_and_gradients, train_mlp, EpochStats, MlpModel, MlpParams, TrainConfig};
pub use ols::{fit_ols, ols_coefficient_pvalues, CoefficientStat, OlsModel};
pub use svr::{fit_svr, rbf_kernel, SvrConfig, SvrModel};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Model families, in the fixed comparison/tie-break order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "OLS")]
    Ols,
    #[serde(rename = "SVM")]
    Svm,
    #[serde(rename = "ANN")]
    Ann,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Ols, ModelKind::Svm, ModelKind::Ann];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Ols => "OLS",
            ModelKind::Svm => "SVM",
            ModelKind::Ann => "ANN",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything needed to train one model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ModelSpec {
    Ols { intercept: bool },
    Svr(SvrConfig),
    Mlp(TrainConfig),
}

impl ModelSpec {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::Ols { .. } => ModelKind::Ols,
            ModelSpec::Svr(_) => ModelKind::Svm,
            ModelSpec::Mlp(_) => ModelKind::Ann,
        }
    }
}

/// A fitted model of any family, with a uniform predict contract.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum TrainedModel {
    Ols(OlsModel),
    Svr(SvrModel),
    Mlp(MlpModel),
}

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            TrainedModel::Ols(_) => ModelKind::Ols,
            TrainedModel::Svr(_) => ModelKind::Svm,
            TrainedModel::Mlp(_) => ModelKind::Ann,
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            TrainedModel::Ols(m) => m.n_features(),
            TrainedModel::Svr(m) => m.n_features(),
            TrainedModel::Mlp(m) => m.n_features(),
        }
    }

    /// Predict on scaled features. MLP inference runs with dropout
    /// disabled, so predictions are deterministic for every family.
    pub fn predict(&self, x: &Matrix) -> Result<Vec<f64>> {
        match self {
            TrainedModel::Ols(m) => m.predict(x),
            TrainedModel::Svr(m) => m.predict(x),
            TrainedModel::Mlp(m) => m.predict(x),
        }
    }
}

/// Uniform prediction entry point.
pub fn predict_model(model: &TrainedModel, x: &Matrix) -> Result<Vec<f64>> {
    model.predict(x)
}

/// Train one model from its spec. OLS and SVR ignore the validation
/// block; the MLP uses it for best-epoch checkpointing.
pub fn fit_model(
    spec: &ModelSpec,
    x_train: &Matrix,
    y_train: &[f64],
    x_val: &Matrix,
    y_val: &[f64],
) -> Result<TrainedModel> {
    match spec {
        ModelSpec::Ols { intercept } => {
            Ok(TrainedModel::Ols(fit_ols(x_train, y_train, *intercept)?))
        }
        ModelSpec::Svr(cfg) => Ok(TrainedModel::Svr(fit_svr(x_train, y_train, cfg)?)),
        ModelSpec::Mlp(cfg) => Ok(TrainedModel::Mlp(train_mlp(
            x_train, y_train, x_val, y_val, cfg,
        )?)),
    }
}

/// On-disk model document: the model plus the context needed to reload it
/// and reproduce predictions exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub model: TrainedModel,
    /// Training feature columns, in order.
    pub feature_names: Vec<String>,
    /// Relative path of the scaler document this model was trained with.
    pub scaler_ref: String,
    /// Pipeline master seed.
    pub seed: u64,
}

pub fn save_model(path: &Path, file: &ModelFile) -> Result<()> {
    let text = serde_json::to_string_pretty(file)
        .map_err(|e| Error::ModelFormat(format!("serialize: {e}")))?;
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_model(path: &Path) -> Result<ModelFile> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::ModelFormat(format!("parse: {e}")))
}
