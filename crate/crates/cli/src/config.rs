//! Pipeline configuration shared by every subcommand.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use legpol_core::dataset::LabelKind;
use legpol_core::models::{MlpGrid, SvrGrid};
use legpol_core::{Error, Result};

/// Which regression task(s) a command works on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TaskSelector {
    House,
    Senate,
    Both,
}

impl TaskSelector {
    pub fn tasks(self) -> Vec<LabelKind> {
        match self {
            TaskSelector::House => vec![LabelKind::House],
            TaskSelector::Senate => vec![LabelKind::Senate],
            TaskSelector::Both => vec![LabelKind::House, LabelKind::Senate],
        }
    }
}

/// Fully resolved run configuration. Serialized into every run manifest
/// so a run can be replayed exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub future: Option<PathBuf>,
    pub task: TaskSelector,
    pub seed: u64,
    pub train_fraction: f64,
    pub lambda: f64,
    pub threshold: f64,
    pub grid: Option<PathBuf>,
    /// Explicit feature list; when absent the selection threshold decides.
    pub features: Option<Vec<String>>,
    pub out_dir: PathBuf,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.train_fraction.is_finite() || self.train_fraction <= 0.0 || self.train_fraction >= 1.0 {
            return Err(Error::InvalidFraction(self.train_fraction));
        }
        if self.lambda.is_nan() || self.lambda < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda must be >= 0, got {}",
                self.lambda
            )));
        }
        if self.threshold.is_nan() || self.threshold < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "threshold must be >= 0, got {}",
                self.threshold
            )));
        }
        let mut paths: Vec<&PathBuf> = vec![&self.input];
        if let Some(f) = &self.future {
            paths.push(f);
        }
        if let Some(g) = &self.grid {
            paths.push(g);
        }
        for (i, a) in paths.iter().enumerate() {
            for b in &paths[i + 1..] {
                if a == b {
                    return Err(Error::InvalidParameter(format!(
                        "input paths must be distinct; `{}` is repeated",
                        a.display()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Hyperparameter grids, read from the `--grid` JSON file. Families
/// without a grid fall back to their defaults.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct GridFile {
    #[serde(default)]
    pub svr: Option<SvrGrid>,
    #[serde(default)]
    pub mlp: Option<MlpGrid>,
}

impl GridFile {
    pub fn load(path: &std::path::Path) -> Result<GridFile> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter(format!("grid file: {e}")))
    }
}
