//! Scenario runner for the `rsl` command: configuration, bound tables,
//! plots and the self-verification suite.

mod app;
pub mod config;
pub mod output;
pub mod scenario;
pub mod verify;

use std::path::PathBuf;

use rsl_core::RslError;
use thiserror::Error;

pub use app::main_with;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("scenario {scenario} at tau = {tau}: {source}")]
    Scenario {
        scenario: &'static str,
        tau: f64,
        source: RslError,
    },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    /// 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            _ => 1,
        }
    }
}
