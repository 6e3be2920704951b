use std::io;
use std::path::PathBuf;

use anclab_core::decoder::DecodeError;
use anclab_core::forest::GenError;
use anclab_core::marker::MarkerError;
use anclab_core::params::ParamError;
use anclab_core::universal::UniversalError;
use thiserror::Error;

use crate::ingest::IngestError;
use crate::labelfile::LabelFileError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    LabelFile(#[from] LabelFileError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Marker(#[from] MarkerError),
    #[error(transparent)]
    Universal(#[from] UniversalError),
    #[error("bench config: {0}")]
    Config(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
            CliError::Marker(e) if e.is_internal() => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
