//! Batch front end: reads a JSON run config, dispatches to the numerical
//! library and writes CSV/JSON results.

pub mod commands;
pub mod config;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use commands::Status;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NOT_CONVERGED: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;

/// Output directory used when neither the config nor the command line names
/// one.
pub const DEFAULT_OUTPUT_DIR: &str = "opq-output";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<opq_core::Error> for CliError {
    fn from(e: opq_core::Error) -> Self {
        match e {
            opq_core::Error::Numerical(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunRequest {
    pub config: PathBuf,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub exit_code: u8,
    pub files: Vec<PathBuf>,
    /// Diagnostic for a nonzero exit code.
    pub message: Option<String>,
}

fn failure(e: CliError) -> RunSummary {
    RunSummary {
        exit_code: e.exit_code(),
        files: vec![],
        message: Some(e.to_string()),
    }
}

/// Executes one config. An `output_dir` named in the config is resolved
/// relative to the config file. Output files are written for every exit code except
/// configuration errors and numerical failures raised before any result
/// exists.
pub fn run(req: &RunRequest) -> RunSummary {
    let bytes = match fs::read(&req.config) {
        Ok(b) => b,
        Err(e) => {
            return failure(CliError::Config(format!(
                "cannot read {}: {e}",
                req.config.display()
            )))
        }
    };
    let base = req
        .config
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    let cfg = match config::parse_config(&bytes, &base) {
        Ok(c) => c,
        Err(e) => return failure(e),
    };
    let seed = req.seed.or(cfg.seed).unwrap_or(0);
    let out_dir = req
        .output_dir
        .clone()
        .or_else(|| cfg.output_dir.as_ref().map(|d| cfg.base_dir.join(d)))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
    log::info!(
        "{} (config {}), seed {seed}",
        cfg.command.name(),
        &cfg.hash[..12]
    );
    let outcome = match commands::execute(&cfg, seed) {
        Ok(o) => o,
        Err(e) => return failure(e),
    };
    let files = match outcome.report.write(&out_dir) {
        Ok(f) => f,
        Err(e) => return failure(e),
    };
    let (exit_code, message) = match outcome.status {
        Status::Ok => (EXIT_OK, None),
        Status::NotConverged(m) => (EXIT_NOT_CONVERGED, Some(m)),
        Status::Failed(m) => (EXIT_NUMERICAL, Some(m)),
    };
    RunSummary {
        exit_code,
        files,
        message,
    }
}
