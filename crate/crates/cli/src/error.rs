use std::io;
use std::path::PathBuf;

use wedge_core::Termination;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("simulation stopped after {done} of {wanted} collisions: {reason}")]
    Terminated { done: usize, wanted: usize, reason: Termination },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn invalid(msg: impl std::fmt::Display) -> Self {
        CliError::Invalid(msg.to_string())
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Terminated { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }
}
