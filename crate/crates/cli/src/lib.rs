//! Library surface of the pipeline driver, so integration tests can call
//! commands directly.

pub mod commands;
pub mod config;
pub mod manifest;

pub use commands::{
    cmd_explore, cmd_predict, cmd_replay, cmd_train, cmd_validate, ExploreOutputs,
    PredictOutputs, TrainOutputs, ValidateReport, ALPHA,
};
pub use config::{GridFile, PipelineConfig, TaskSelector};
pub use manifest::RunManifest;
