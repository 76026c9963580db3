//! Scenario runner for distillability dynamics.
//!
//! A scenario is described by a [`ScenarioConfig`], run into a [`CsvTable`],
//! and written atomically. See [`config`] for the document grammar.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod csv;
pub mod scenarios;

use std::path::PathBuf;

pub use config::{ConfigError, ModelKind, Scenario, ScenarioConfig};
pub use csv::CsvTable;
pub use scenarios::run;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot read config {path}: {source}")]
    ReadConfig { path: PathBuf, source: std::io::Error },
    #[error("{scenario} failed: {source}")]
    Numerical {
        scenario: Scenario,
        source: distill_core::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 for configuration problems, 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::ReadConfig { .. } => 2,
            CliError::Numerical { .. } => 3,
            CliError::Write { .. } => 1,
        }
    }
}

/// Runs `cfg` and writes its CSV to `cfg.output`, or returns it when unset.
pub fn execute(cfg: &ScenarioConfig) -> Result<Option<String>, CliError> {
    let table = run(cfg)?;
    match &cfg.output {
        Some(path) => {
            table.write_atomic(path).map_err(|source| CliError::Write {
                path: path.clone(),
                source,
            })?;
            Ok(None)
        }
        None => Ok(Some(table.to_csv_string())),
    }
}
