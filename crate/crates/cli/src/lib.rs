//! Command implementations behind the `gdgame` binary.
//!
//! Each command is a plain function over a parsed configuration so it can be
//! driven from tests without spawning a process.

use std::path::PathBuf;

use thiserror::Error;

pub mod config;
pub mod format;
pub mod simulate;
pub mod spectral;
pub mod verify;

pub use config::{GraphSource, InitSource, RunConfig};
pub use simulate::{cmd_simulate, Summary};
pub use spectral::cmd_spectral;
pub use verify::{cmd_verify, Suite, VerifyReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] garbage_game::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("trajectory failed validation: {0}")]
    Validation(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn write_file(path: &std::path::Path, contents: &[u8]) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
