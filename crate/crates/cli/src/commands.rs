//! The four pipeline commands: validate, explore, train, predict.
//!
//! Each command is a pure function of (input files, config): it reads its
//! inputs, writes its artifacts under `<out>/<command>/`, and records a
//! run manifest with content digests so the run can be replayed exactly.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use legpol_core::dataset::{
    apply_minmax, fit_minmax, load_table, split_train_validation, DataSplit, DatasetTable,
    LabelKind, ScalerParams,
};
use legpol_core::evaluation::{compare_models, predict_unlabeled, EvalReport, PredictionSet};
use legpol_core::models::{
    fit_model, grid_search, load_model, ols_coefficient_pvalues, save_model, GridSearchResult,
    ModelFile, ModelKind, ModelSpec, SvrConfig, TrainConfig, TrainedModel,
};
use legpol_core::stats::{
    correlation_matrix, correlation_pairs, flag_nonlinear, select_features, CorrelationPair,
    FlagReport,
};
use legpol_core::{Error, Matrix, Result};

use crate::config::{GridFile, PipelineConfig};
use crate::manifest::RunManifest;

/// Significance level for the pairwise prediction comparison.
pub const ALPHA: f64 = 0.05;

/// Reset a command's own output directory so artifacts from earlier runs
/// cannot survive into this one.
fn fresh_dir(out_root: &Path, command: &str) -> Result<PathBuf> {
    let dir = out_root.join(command);
    if dir.exists() {
        fs::remove_dir_all(&dir).map_err(|source| Error::Io {
            path: dir.clone(),
            source,
        })?;
    }
    fs::create_dir_all(&dir).map_err(|source| Error::Io {
        path: dir.clone(),
        source,
    })?;
    Ok(dir)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| Error::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidParameter(format!("serialize {}: {e}", path.display())))?;
    write_file(path, &text)
}

// ---------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidateReport {
    pub rows: usize,
    pub n_features: usize,
    pub feature_names: Vec<String>,
    pub labels_present: bool,
    /// True when ingestion had to re-sort the incoming rows into
    /// (year, state) order.
    pub resorted: bool,
    pub train_rows: usize,
    pub validation_rows: usize,
    pub future_rows: Option<usize>,
}

impl ValidateReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} rows, {} features, labels {}\n",
            self.rows,
            self.n_features,
            if self.labels_present { "present" } else { "absent" }
        );
        out.push_str(if self.resorted {
            "row order: re-sort applied (year ascending, state ascending)\n"
        } else {
            "row order: already sorted (year ascending, state ascending)\n"
        });
        out.push_str(&format!(
            "split at configured fraction: {} train / {} validation\n",
            self.train_rows, self.validation_rows
        ));
        if let Some(n) = self.future_rows {
            out.push_str(&format!("future table: {n} rows, schema matches\n"));
        }
        out
    }
}

pub fn cmd_validate(config: &PipelineConfig) -> Result<ValidateReport> {
    config.validate()?;
    let table = load_table(&config.input, None, true)?;
    let split = split_train_validation(&table, config.train_fraction, config.seed)?;

    let future_rows = match &config.future {
        Some(path) => {
            let future = load_table(path, Some(table.feature_names()), false)?;
            Some(future.len())
        }
        None => None,
    };

    let dir = fresh_dir(&config.out_dir, "validate")?;
    let report = ValidateReport {
        rows: table.len(),
        n_features: table.feature_names().len(),
        feature_names: table.feature_names().to_vec(),
        labels_present: table.has_labels(),
        resorted: table.was_resorted(),
        train_rows: split.train_indices.len(),
        validation_rows: split.validation_indices.len(),
        future_rows,
    };

    write_json(&dir.join("validate_report.json"), &report)?;
    RunManifest::new("validate", config)?.write(&dir)?;
    Ok(report)
}

// ---------------------------------------------------------------------
// explore
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExploreOutputs {
    pub flag_reports: Vec<FlagReport>,
    pub pairs: Vec<CorrelationPair>,
    pub selected: Vec<String>,
}

pub fn cmd_explore(config: &PipelineConfig) -> Result<ExploreOutputs> {
    config.validate()?;
    let table = load_table(&config.input, None, true)?;
    let dir = fresh_dir(&config.out_dir, "explore")?;

    let mut flag_reports = Vec::new();
    for task in [LabelKind::House, LabelKind::Senate] {
        let labels = table
            .labels(task)
            .ok_or_else(|| Error::MissingLabels(task.to_string()))?;
        let report = flag_nonlinear(
            table.features(),
            labels,
            table.feature_names(),
            task.column_name(),
            config.lambda,
        )?;
        write_json(&dir.join(format!("flag_report_{task}.json")), &report)?;
        write_file(
            &dir.join(format!("flag_report_{task}.csv")),
            &report.to_delimited(),
        )?;
        flag_reports.push(report);
    }

    let pairs = correlation_pairs(&table)?;
    write_json(&dir.join("correlation_pairs.json"), &pairs)?;
    let mut pairs_csv = String::from("feature,r_house,r_senate\n");
    for p in &pairs {
        pairs_csv.push_str(&format!("{},{},{}\n", p.feature_name, p.r_house, p.r_senate));
    }
    write_file(&dir.join("correlation_pairs.csv"), &pairs_csv)?;

    let selected = select_features(&pairs, config.threshold);
    write_json(&dir.join("selected_features.json"), &selected)?;

    // Heat-map data over the selected features, one matrix per label.
    let reduced = table.select_features(&selected)?;
    for task in [LabelKind::House, LabelKind::Senate] {
        let matrix = correlation_matrix(&reduced, task)?;
        write_json(&dir.join(format!("correlation_matrix_{task}.json")), &matrix)?;
        write_file(
            &dir.join(format!("correlation_matrix_{task}.csv")),
            &matrix.to_delimited(),
        )?;
    }

    RunManifest::new("explore", config)?.write(&dir)?;
    Ok(ExploreOutputs {
        flag_reports,
        pairs,
        selected,
    })
}

// ---------------------------------------------------------------------
// train
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TaskArtifacts {
    pub task: LabelKind,
    pub eval: EvalReport,
    pub grid_results: Vec<(ModelKind, GridSearchResult)>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrainOutputs {
    pub features: Vec<String>,
    pub split: DataSplit,
    pub tasks: Vec<TaskArtifacts>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FailureManifest {
    failures: Vec<String>,
}

/// Resolve the active feature list: explicit config, then a previous
/// explore output, then in-line selection at the configured threshold.
fn resolve_features(config: &PipelineConfig, table: &DatasetTable) -> Result<Vec<String>> {
    if let Some(features) = &config.features {
        return Ok(features.clone());
    }
    let explore_file = config.out_dir.join("explore").join("selected_features.json");
    if explore_file.exists() {
        let text = fs::read_to_string(&explore_file).map_err(|source| Error::Io {
            path: explore_file.clone(),
            source,
        })?;
        let selected: Vec<String> = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter(format!("selected_features.json: {e}")))?;
        return Ok(selected);
    }
    let pairs = correlation_pairs(table)?;
    Ok(select_features(&pairs, config.threshold))
}

pub fn cmd_train(config: &PipelineConfig) -> Result<TrainOutputs> {
    config.validate()?;
    let table = load_table(&config.input, None, true)?;
    let dir = fresh_dir(&config.out_dir, "train")?;
    let mut failures: Vec<String> = Vec::new();

    let features = resolve_features(config, &table)?;
    if features.is_empty() {
        return Err(Error::InvalidParameter(
            "feature selection produced an empty set".to_string(),
        ));
    }
    let reduced = table.select_features(&features)?;
    write_json(&dir.join("selected_features.json"), &features)?;

    let split = split_train_validation(&reduced, config.train_fraction, config.seed)?;
    write_json(&dir.join("split.json"), &split)?;
    let scaler = fit_minmax(&reduced, &split)?;
    write_file(&dir.join("scaler.json"), &scaler.to_json())?;

    let scaled = apply_minmax(reduced.features(), &scaler)?;
    let x_train = scaled.select_rows(&split.train_indices);
    let x_val = scaled.select_rows(&split.validation_indices);

    let grids = match &config.grid {
        Some(path) => GridFile::load(path)?,
        None => GridFile::default(),
    };

    let mut tasks = Vec::new();
    for task in config.task.tasks() {
        match train_one_task(
            config, &dir, task, &reduced, &split, &x_train, &x_val, &grids,
        ) {
            Ok(artifacts) => tasks.push(artifacts),
            Err(e) => failures.push(format!("{task}: {e}")),
        }
    }

    if config.task.tasks().len() == 2 && tasks.len() == 2 {
        write_file(&dir.join("summary.txt"), &summary_table(&tasks))?;
    }
    RunManifest::new("train", config)?.write(&dir)?;

    if !failures.is_empty() {
        write_json(&dir.join("failure_manifest.json"), &FailureManifest {
            failures: failures.clone(),
        })?;
        return Err(Error::TrainingFailed(format!(
            "task(s) did not complete: {}",
            failures.join("; ")
        )));
    }

    Ok(TrainOutputs {
        features,
        split,
        tasks,
    })
}

#[allow(clippy::too_many_arguments)]
fn train_one_task(
    config: &PipelineConfig,
    dir: &Path,
    task: LabelKind,
    reduced: &DatasetTable,
    split: &DataSplit,
    x_train: &Matrix,
    x_val: &Matrix,
    grids: &GridFile,
) -> Result<TaskArtifacts> {
    let labels = reduced
        .labels(task)
        .ok_or_else(|| Error::MissingLabels(task.to_string()))?;
    let y_train: Vec<f64> = split.train_indices.iter().map(|&i| labels[i]).collect();
    let y_val: Vec<f64> = split.validation_indices.iter().map(|&i| labels[i]).collect();
    let task_dir = dir.join(task.to_string());
    fs::create_dir_all(&task_dir).map_err(|source| Error::Io {
        path: task_dir.clone(),
        source,
    })?;
    let n_features = reduced.feature_names().len();
    let mut warnings = Vec::new();
    let mut grid_results = Vec::new();

    // Resolve one spec per family, running grid search where a grid was
    // supplied.
    let svr_base = SvrConfig::default_for(n_features);
    let svr_spec = match &grids.svr {
        Some(grid) => {
            let result = grid_search(&grid.cells(&svr_base), x_train, &y_train, x_val, &y_val)?;
            write_json(&task_dir.join("grid_svr.json"), &result)?;
            let best = result.best.clone();
            grid_results.push((ModelKind::Svm, result));
            best
        }
        None => ModelSpec::Svr(svr_base),
    };
    let mlp_base = TrainConfig {
        seed: config.seed,
        ..TrainConfig::default()
    };
    let mlp_spec = match &grids.mlp {
        Some(grid) => {
            let result = grid_search(&grid.cells(&mlp_base), x_train, &y_train, x_val, &y_val)?;
            write_json(&task_dir.join("grid_mlp.json"), &result)?;
            let best = result.best.clone();
            grid_results.push((ModelKind::Ann, result));
            best
        }
        None => ModelSpec::Mlp(mlp_base),
    };

    let specs = [
        ModelSpec::Ols { intercept: true },
        svr_spec,
        mlp_spec,
    ];

    let mut predictions = Vec::new();
    for spec in &specs {
        let kind = spec.kind();
        match fit_model(spec, x_train, &y_train, x_val, &y_val) {
            Ok(model) => {
                if let TrainedModel::Mlp(mlp) = &model {
                    write_file(&task_dir.join("mlp_history.csv"), &mlp.history_delimited())?;
                }
                let preds = model.predict(x_val)?;
                let file = ModelFile {
                    model,
                    feature_names: reduced.feature_names().to_vec(),
                    scaler_ref: "../scaler.json".to_string(),
                    seed: config.seed,
                };
                save_model(
                    &task_dir.join(format!("model_{}.json", kind.as_str().to_lowercase())),
                    &file,
                )?;
                predictions.push((kind, preds));
            }
            Err(e) => warnings.push(format!("{kind} failed: {e}")),
        }
    }
    if predictions.is_empty() {
        return Err(Error::TrainingFailed(
            "no model trained successfully".to_string(),
        ));
    }

    // Coefficient significance on the training block (fit without an
    // intercept so the rows speak about the features).
    match ols_coefficient_pvalues(x_train, &y_train) {
        Ok(stats) => {
            let named: Vec<serde_json::Value> = reduced
                .feature_names()
                .iter()
                .zip(&stats)
                .map(|(name, s)| {
                    serde_json::json!({
                        "feature": name,
                        "coefficient": s.coefficient,
                        "t": s.t_statistic,
                        "p": s.p_value,
                    })
                })
                .collect();
            write_json(&task_dir.join("coefficient_pvalues.json"), &named)?;
            let mut csv = String::from("feature,coefficient,t,p\n");
            for (name, s) in reduced.feature_names().iter().zip(&stats) {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    name, s.coefficient, s.t_statistic, s.p_value
                ));
            }
            write_file(&task_dir.join("coefficient_pvalues.csv"), &csv)?;
        }
        Err(e) => warnings.push(format!("coefficient p-values unavailable: {e}")),
    }

    let eval = EvalReport::build(task, predictions, y_val, split.seed)?;
    write_json(&task_dir.join("eval_report.json"), &eval)?;
    write_file(&task_dir.join("eval_report.txt"), &eval.to_text_table())?;

    let comparison = compare_models(&eval, ALPHA);
    write_json(&task_dir.join("wilcoxon.json"), &comparison)?;
    write_file(&task_dir.join("wilcoxon.csv"), &comparison.to_delimited())?;

    Ok(TaskArtifacts {
        task,
        eval,
        grid_results,
        warnings,
    })
}

fn summary_table(tasks: &[TaskArtifacts]) -> String {
    let house = tasks.iter().find(|t| t.task == LabelKind::House);
    let senate = tasks.iter().find(|t| t.task == LabelKind::Senate);
    let mut out = String::from("Validation RMSE by model\n");
    out.push_str("Model  House   Senate\n");
    for kind in ModelKind::ALL {
        let cell = |t: Option<&TaskArtifacts>| -> String {
            t.and_then(|t| t.eval.rmse_of(kind))
                .map_or("  -  ".to_string(), |v| {
                    let marker = if t.map(|t| t.eval.chosen_model) == Some(kind) {
                        "*"
                    } else {
                        " "
                    };
                    format!("{v:.3}{marker}")
                })
        };
        out.push_str(&format!(
            "{:<5}  {:<6}  {:<6}\n",
            kind.to_string(),
            cell(house),
            cell(senate)
        ));
    }
    out.push_str("* lowest validation RMSE for the task\n");
    out
}

// ---------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PredictOutputs {
    pub sets: Vec<PredictionSet>,
}

pub fn cmd_predict(config: &PipelineConfig) -> Result<PredictOutputs> {
    config.validate()?;
    let future_path = config.future.as_ref().ok_or_else(|| {
        Error::InvalidParameter("predict needs --future <file>".to_string())
    })?;

    // The future file must carry the same feature schema as the labeled
    // input it extends. A future file that unexpectedly carries label
    // columns is still accepted; the labels are ignored downstream with
    // a warning.
    let labeled = load_table(&config.input, None, true)?;
    let future = match load_table(future_path, Some(labeled.feature_names()), false) {
        Err(Error::SchemaMismatch(msg)) if msg.contains("label columns present") => {
            load_table(future_path, Some(labeled.feature_names()), true)?
        }
        other => other?,
    };

    let train_dir = config.out_dir.join("train");
    let dir = fresh_dir(&config.out_dir, "predict")?;
    let mut sets = Vec::new();

    for task in config.task.tasks() {
        let task_dir = train_dir.join(task.to_string());
        let eval_path = task_dir.join("eval_report.json");
        let eval_text = fs::read_to_string(&eval_path).map_err(|source| Error::Io {
            path: eval_path.clone(),
            source,
        })?;
        let eval: EvalReport = serde_json::from_str(&eval_text)
            .map_err(|e| Error::InvalidParameter(format!("eval_report.json: {e}")))?;
        let chosen = eval.chosen_model;
        let model_path = task_dir.join(format!("model_{}.json", chosen.as_str().to_lowercase()));
        let model_file = load_model(&model_path)?;

        // The model document names its scaler relative to its own file.
        let scaler_path = model_path
            .parent()
            .expect("model path has a parent")
            .join(&model_file.scaler_ref);
        let scaler_text = fs::read_to_string(&scaler_path).map_err(|source| Error::Io {
            path: scaler_path.clone(),
            source,
        })?;
        let scaler = ScalerParams::from_json(&scaler_text, &model_file.feature_names)?;

        let subset = future.select_features(&model_file.feature_names)?;
        let set = predict_unlabeled(
            &model_file.model,
            chosen.as_str(),
            task,
            &scaler,
            &subset,
        )?;
        write_file(&dir.join(format!("predictions_{task}.csv")), &set.to_delimited())?;
        write_json(&dir.join(format!("predictions_{task}.json")), &set)?;
        sets.push(set);
    }

    RunManifest::new("predict", config)?.write(&dir)?;
    Ok(PredictOutputs { sets })
}

// ---------------------------------------------------------------------
// replay
// ---------------------------------------------------------------------

/// Re-run the command recorded in a manifest with its stored config.
pub fn cmd_replay(manifest_path: &Path) -> Result<String> {
    let manifest = RunManifest::load(manifest_path)?;
    match manifest.command.as_str() {
        "validate" => {
            cmd_validate(&manifest.config)?;
        }
        "explore" => {
            cmd_explore(&manifest.config)?;
        }
        "train" => {
            cmd_train(&manifest.config)?;
        }
        "predict" => {
            cmd_predict(&manifest.config)?;
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown command `{other}` in manifest"
            )))
        }
    }
    Ok(manifest.command)
}
