use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hvt_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("step {step}: input {input} has probability {probability:.3e} but its transition column is undefined")]
    UndefinedColumn {
        step: usize,
        input: usize,
        probability: f64,
    },
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NONCONVERGENCE: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(hvt_core::Error::NonConvergence(_)) => EXIT_NONCONVERGENCE,
            _ => EXIT_ERROR,
        }
    }
}
