//! Exhaustive hyperparameter grid search.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::rmse;
use crate::matrix::Matrix;
use crate::models::{fit_model, ModelSpec};

/// Outcome of one grid cell. Failed fits keep their error text so the
/// sweep can finish and still report them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridCellOutcome {
    pub spec: ModelSpec,
    pub validation_rmse: Option<f64>,
    pub error: Option<String>,
}

/// Best cell plus the full per-cell RMSE table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best_index: usize,
    pub best: ModelSpec,
    pub cells: Vec<GridCellOutcome>,
}

/// Evaluate every cell and return the argmin of validation RMSE.
///
/// Ties break toward the first cell in declared grid order. Cells that
/// fail to train are recorded and skipped; the search only errors when
/// the grid is empty or no cell trains at all.
pub fn grid_search(
    cells: &[ModelSpec],
    x_train: &Matrix,
    y_train: &[f64],
    x_val: &Matrix,
    y_val: &[f64],
) -> Result<GridSearchResult> {
    if cells.is_empty() {
        return Err(Error::InvalidParameter("empty hyperparameter grid".into()));
    }
    let mut outcomes = Vec::with_capacity(cells.len());
    let mut best: Option<(usize, f64)> = None;
    for (index, spec) in cells.iter().enumerate() {
        let outcome = fit_model(spec, x_train, y_train, x_val, y_val)
            .and_then(|model| model.predict(x_val))
            .and_then(|preds| rmse(y_val, &preds));
        match outcome {
            Ok(score) => {
                if best.is_none_or(|(_, s)| score < s) {
                    best = Some((index, score));
                }
                outcomes.push(GridCellOutcome {
                    spec: spec.clone(),
                    validation_rmse: Some(score),
                    error: None,
                });
            }
            Err(e) => outcomes.push(GridCellOutcome {
                spec: spec.clone(),
                validation_rmse: None,
                error: Some(e.to_string()),
            }),
        }
    }
    let (best_index, _) = best.ok_or_else(|| {
        Error::TrainingFailed("every grid cell failed to train".to_string())
    })?;
    Ok(GridSearchResult {
        best_index,
        best: cells[best_index].clone(),
        cells: outcomes,
    })
}

/// Cartesian SVR grid. Cell order nests `c` (outer), then `epsilon`,
/// then `gamma`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SvrGrid {
    pub c: Vec<f64>,
    pub epsilon: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl SvrGrid {
    pub fn cells(&self, base: &crate::models::svr::SvrConfig) -> Vec<ModelSpec> {
        let mut out = Vec::new();
        for &c in &self.c {
            for &epsilon in &self.epsilon {
                for &gamma in &self.gamma {
                    let mut cfg = base.clone();
                    cfg.c_penalty = c;
                    cfg.epsilon_tube = epsilon;
                    cfg.gamma = gamma;
                    out.push(ModelSpec::Svr(cfg));
                }
            }
        }
        out
    }
}

/// Cartesian MLP grid over the optimizer/architecture knobs the pipeline
/// exposes. Cell order nests `learning_rate`, then `batch_size`, then
/// `hidden_width`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MlpGrid {
    pub learning_rate: Vec<f64>,
    pub batch_size: Vec<usize>,
    pub hidden_width: Vec<usize>,
}

impl MlpGrid {
    pub fn cells(&self, base: &crate::models::mlp::TrainConfig) -> Vec<ModelSpec> {
        let mut out = Vec::new();
        for &learning_rate in &self.learning_rate {
            for &batch_size in &self.batch_size {
                for &hidden_width in &self.hidden_width {
                    let mut cfg = base.clone();
                    cfg.learning_rate = learning_rate;
                    cfg.batch_size = batch_size;
                    cfg.hidden_width = hidden_width;
                    out.push(ModelSpec::Mlp(cfg));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::svr::SvrConfig;

    fn line_data() -> (Matrix, Vec<f64>) {
        let x = Matrix::from_rows(&(0..16).map(|i| vec![i as f64 / 15.0]).collect::<Vec<_>>())
            .unwrap();
        let y = x.column(0).iter().map(|v| 2.0 * v + 0.3).collect();
        (x, y)
    }

    #[test]
    fn single_cell_grid_returns_it() {
        let (x, y) = line_data();
        let cells = vec![ModelSpec::Ols { intercept: true }];
        let result = grid_search(&cells, &x, &y, &x, &y).unwrap();
        assert_eq!(result.best_index, 0);
        assert_eq!(result.cells.len(), 1);
        assert!(result.cells[0].validation_rmse.unwrap() < 1e-10);
    }

    #[test]
    fn degenerate_epsilon_cell_loses() {
        let (x, y) = line_data();
        // First cell: tube wider than the whole label range, collapses to
        // a constant predictor. Second cell: a sane configuration.
        let wide = SvrConfig {
            epsilon_tube: 10.0,
            ..SvrConfig::default_for(1)
        };
        let sane = SvrConfig {
            c_penalty: 10.0,
            epsilon_tube: 0.01,
            gamma: 1.0,
            tolerance: 1e-4,
            max_passes: 10_000,
        };
        let cells = vec![ModelSpec::Svr(wide), ModelSpec::Svr(sane)];
        let result = grid_search(&cells, &x, &y, &x, &y).unwrap();
        assert_eq!(result.best_index, 1);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let (x, y) = line_data();
        assert!(grid_search(&[], &x, &y, &x, &y).is_err());
    }

    #[test]
    fn failed_cell_is_reported_and_sweep_continues() {
        let (x, y) = line_data();
        let broken = SvrConfig {
            gamma: 0.0, // invalid
            ..SvrConfig::default_for(1)
        };
        let cells = vec![
            ModelSpec::Svr(broken.clone()),
            ModelSpec::Ols { intercept: true },
        ];
        let result = grid_search(&cells, &x, &y, &x, &y).unwrap();
        assert_eq!(result.best_index, 1);
        assert!(result.cells[0].error.is_some());
        assert!(result.cells[0].validation_rmse.is_none());
        assert!(result.cells[1].validation_rmse.is_some());

        // Every cell failing is a training failure, not a usage error.
        let err = grid_search(&[ModelSpec::Svr(broken)], &x, &y, &x, &y).unwrap_err();
        assert!(matches!(err, crate::error::Error::TrainingFailed(_)));
    }

    #[test]
    fn svr_grid_cell_order_is_declared() {
        let grid = SvrGrid {
            c: vec![1.0, 2.0],
            epsilon: vec![0.1],
            gamma: vec![0.5, 1.5],
        };
        let cells = grid.cells(&SvrConfig::default_for(1));
        let as_tuples: Vec<(f64, f64)> = cells
            .iter()
            .map(|spec| match spec {
                ModelSpec::Svr(cfg) => (cfg.c_penalty, cfg.gamma),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(
            as_tuples,
            vec![(1.0, 0.5), (1.0, 1.5), (2.0, 0.5), (2.0, 1.5)]
        );
    }
}
