//! RMSE scoring, argmin model selection, pairwise prediction comparison,
//! and unlabeled-year prediction export.

use serde::{Deserialize, Serialize};

use crate::dataset::{apply_minmax, DatasetTable, LabelKind, ScalerParams};
use crate::error::{Error, Result};
use crate::models::{ModelKind, TrainedModel};
use crate::stats::{wilcoxon_signed_rank, WilcoxonResult};

/// Root mean square error between truth and predictions.
pub fn rmse(y: &[f64], yhat: &[f64]) -> Result<f64> {
    if y.len() != yhat.len() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: yhat.len(),
        });
    }
    if y.is_empty() {
        return Err(Error::InvalidParameter(
            "RMSE of empty vectors is undefined".to_string(),
        ));
    }
    let acc: f64 = y
        .iter()
        .zip(yhat)
        .map(|(a, b)| (b - a) * (b - a))
        .sum();
    Ok((acc / y.len() as f64).sqrt())
}

/// Winner of the argmin selection, with any exact ties recorded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionOutcome {
    pub chosen: ModelKind,
    /// Other models attaining exactly the winning RMSE, if any.
    pub tied_with: Vec<ModelKind>,
}

/// Pick the model with the lowest RMSE. Exact ties break toward the fixed
/// model order (OLS, SVM, ANN) and are reported.
pub fn select_best(scores: &[(ModelKind, f64)]) -> Result<SelectionOutcome> {
    if scores.is_empty() {
        return Err(Error::InvalidParameter("no models to select from".into()));
    }
    for (kind, score) in scores {
        if !score.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "RMSE for {kind} is not finite ({score})"
            )));
        }
    }
    let mut ordered: Vec<(ModelKind, f64)> = scores.to_vec();
    ordered.sort_by_key(|(kind, _)| *kind);
    let (mut chosen, mut best) = ordered[0];
    for &(kind, score) in &ordered[1..] {
        if score < best {
            chosen = kind;
            best = score;
        }
    }
    let tied_with: Vec<ModelKind> = ordered
        .iter()
        .filter(|(kind, score)| *kind != chosen && *score == best)
        .map(|(kind, _)| *kind)
        .collect();
    Ok(SelectionOutcome { chosen, tied_with })
}

/// Validation-set evaluation of every trained model on one task.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub task: LabelKind,
    /// Validation RMSE per model, in fixed model order.
    pub rmse_by_model: Vec<(ModelKind, f64)>,
    pub chosen_model: ModelKind,
    pub tied_with: Vec<ModelKind>,
    /// Per-model predictions over the validation rows (one row per model,
    /// aligned with `validation_truth`).
    pub validation_predictions: Vec<(ModelKind, Vec<f64>)>,
    pub validation_truth: Vec<f64>,
    pub split_seed: u64,
}

impl EvalReport {
    /// Assemble a report from per-model validation predictions, scoring
    /// and selecting in one pass.
    pub fn build(
        task: LabelKind,
        predictions: Vec<(ModelKind, Vec<f64>)>,
        truth: Vec<f64>,
        split_seed: u64,
    ) -> Result<EvalReport> {
        if predictions.is_empty() {
            return Err(Error::InvalidParameter("no model predictions".into()));
        }
        let mut predictions = predictions;
        predictions.sort_by_key(|(kind, _)| *kind);
        let mut scores = Vec::with_capacity(predictions.len());
        for (kind, preds) in &predictions {
            scores.push((*kind, rmse(&truth, preds)?));
        }
        let selection = select_best(&scores)?;
        Ok(EvalReport {
            task,
            rmse_by_model: scores,
            chosen_model: selection.chosen,
            tied_with: selection.tied_with,
            validation_predictions: predictions,
            validation_truth: truth,
            split_seed,
        })
    }

    pub fn rmse_of(&self, kind: ModelKind) -> Option<f64> {
        self.rmse_by_model
            .iter()
            .find(|(k, _)| *k == kind)
            .map(|(_, v)| *v)
    }

    pub fn predictions_of(&self, kind: ModelKind) -> Option<&[f64]> {
        self.validation_predictions
            .iter()
            .find(|(k, _)| *k == kind)
            .map(|(_, v)| v.as_slice())
    }

    /// Human-readable table: one row per model, RMSE at 3 decimals, the
    /// winner starred.
    pub fn to_text_table(&self) -> String {
        let mut out = format!(
            "Validation results — {} task (v = {} samples, seed {})\n",
            self.task,
            self.validation_truth.len(),
            self.split_seed
        );
        out.push_str("Model  RMSE\n");
        for (kind, score) in &self.rmse_by_model {
            let marker = if *kind == self.chosen_model { " *" } else { "" };
            out.push_str(&format!("{:<5}  {:.3}{}\n", kind.to_string(), score, marker));
        }
        if !self.tied_with.is_empty() {
            let ties: Vec<String> = self.tied_with.iter().map(|k| k.to_string()).collect();
            out.push_str(&format!(
                "* tie with {} broken by fixed model order\n",
                ties.join(", ")
            ));
        }
        out
    }
}

/// One pairwise Wilcoxon comparison row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairComparison {
    pub model_a: ModelKind,
    pub model_b: ModelKind,
    pub result: Option<WilcoxonResult>,
    /// `p < alpha`, when the test was defined.
    pub significant: Option<bool>,
    pub error: Option<String>,
}

/// All unordered model pairs tested on their paired validation predictions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub task: LabelKind,
    pub alpha: f64,
    pub pairs: Vec<PairComparison>,
}

impl ComparisonTable {
    /// Delimited rendering: `pair,w,n_effective,z,p,significant`.
    pub fn to_delimited(&self) -> String {
        let mut out = String::from("pair,w,n_effective,z,p,significant\n");
        for pair in &self.pairs {
            let label = format!("{}-{}", pair.model_a, pair.model_b);
            match (&pair.result, &pair.error) {
                (Some(r), _) => out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    label,
                    r.w_statistic,
                    r.n_effective,
                    r.z_score,
                    r.p_two_tailed,
                    pair.significant.unwrap_or(false)
                )),
                (None, Some(e)) => out.push_str(&format!("{label},,,,,error: {e}\n")),
                (None, None) => out.push_str(&format!("{label},,,,,\n")),
            }
        }
        out
    }
}

/// Wilcoxon signed-rank test on each unordered pair of models' validation
/// predictions. A degenerate pair (for instance identical predictions)
/// is reported in place without aborting the other pairs.
pub fn compare_models(report: &EvalReport, alpha: f64) -> ComparisonTable {
    let mut pairs = Vec::new();
    let models = &report.validation_predictions;
    for i in 0..models.len() {
        for j in (i + 1)..models.len() {
            let (kind_a, preds_a) = &models[i];
            let (kind_b, preds_b) = &models[j];
            match wilcoxon_signed_rank(preds_a, preds_b) {
                Ok(result) => {
                    let significant = result.p_two_tailed < alpha;
                    pairs.push(PairComparison {
                        model_a: *kind_a,
                        model_b: *kind_b,
                        result: Some(result),
                        significant: Some(significant),
                        error: None,
                    });
                }
                Err(e) => pairs.push(PairComparison {
                    model_a: *kind_a,
                    model_b: *kind_b,
                    result: None,
                    significant: None,
                    error: Some(e.to_string()),
                }),
            }
        }
    }
    ComparisonTable {
        task: report.task,
        alpha,
        pairs,
    }
}

/// One predicted row for an unlabeled year.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionRow {
    pub state: String,
    pub year: i32,
    pub predicted: f64,
    /// Set when the prediction is negative: polarization indices live in
    /// the positive reals, so a negative output marks out-of-domain model
    /// behavior. Values are deliberately not clipped.
    pub flagged: bool,
}

/// Choropleth-ready predictions for one task and model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionSet {
    pub task: LabelKind,
    pub model_id: String,
    pub rows: Vec<PredictionRow>,
    pub warnings: Vec<String>,
}

impl PredictionSet {
    /// Delimited rendering: `state,year,predicted_polarization,model_id,flagged`.
    pub fn to_delimited(&self) -> String {
        let mut out = String::from("state,year,predicted_polarization,model_id,flagged\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.state, row.year, row.predicted, self.model_id, row.flagged
            ));
        }
        out
    }
}

/// Predict an unlabeled table with a trained model and its training
/// scaler.
///
/// The future table's feature columns must match the training schema
/// exactly (same names, same order). If the table happens to carry
/// labels they are ignored with a warning.
pub fn predict_unlabeled(
    model: &TrainedModel,
    model_id: &str,
    task: LabelKind,
    scaler: &ScalerParams,
    future: &DatasetTable,
) -> Result<PredictionSet> {
    if future.feature_names() != scaler.feature_names() {
        return Err(schema_difference(
            scaler.feature_names(),
            future.feature_names(),
        ));
    }
    let mut warnings = Vec::new();
    if future.labels(LabelKind::House).is_some() || future.labels(LabelKind::Senate).is_some() {
        warnings.push("future table carries label columns; they are ignored".to_string());
    }
    let scaled = apply_minmax(future.features(), scaler)?;
    let predictions = model.predict(&scaled)?;
    let rows = future
        .rows()
        .iter()
        .zip(&predictions)
        .map(|(key, &predicted)| PredictionRow {
            state: key.state.clone(),
            year: key.year,
            predicted,
            flagged: predicted < 0.0,
        })
        .collect();
    Ok(PredictionSet {
        task,
        model_id: model_id.to_string(),
        rows,
        warnings,
    })
}

fn schema_difference(expected: &[String], actual: &[String]) -> Error {
    for name in actual {
        if !expected.contains(name) {
            return Error::SchemaMismatch(format!("unexpected feature column `{name}`"));
        }
    }
    for name in expected {
        if !actual.contains(name) {
            return Error::SchemaMismatch(format!("missing feature column `{name}`"));
        }
    }
    Error::SchemaMismatch("feature columns out of order".to_string())
}
