//! Run manifests: enough context to replay a command byte-for-byte.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use legpol_core::{Error, Result};

use crate::config::PipelineConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: PipelineConfig,
    /// SHA-256 of every input file the command read.
    pub input_digests: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str, config: &PipelineConfig) -> Result<RunManifest> {
        let mut input_digests = BTreeMap::new();
        let mut record = |path: &Path| -> Result<()> {
            input_digests.insert(path.display().to_string(), file_digest(path)?);
            Ok(())
        };
        record(&config.input)?;
        if let Some(future) = &config.future {
            if future.exists() {
                record(future)?;
            }
        }
        if let Some(grid) = &config.grid {
            record(grid)?;
        }
        Ok(RunManifest {
            command: command.to_string(),
            config: config.clone(),
            input_digests,
        })
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::InvalidParameter(format!("manifest: {e}")))?;
        let path = dir.join("run_manifest.json");
        std::fs::write(&path, text).map_err(|source| Error::Io { path, source })
    }

    pub fn load(path: &Path) -> Result<RunManifest> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter(format!("manifest: {e}")))
    }
}

pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(format!("{:x}", hasher.finalize()))
}
