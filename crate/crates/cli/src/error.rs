use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_TIMEOUT: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Module { path: PathBuf, source: vnarrow::Error },
    #[error("{path} declares no module")]
    NoModule { path: PathBuf },
    #[error("no module named {0}")]
    UnknownModule(String),
    #[error("term: {0}")]
    Term(vnarrow::Error),
    #[error(transparent)]
    Engine(#[from] vnarrow::Error),
    #[error(transparent)]
    Config(#[from] vnarrow_service::ConfigError),
    #[error("server: {0}")]
    Serve(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Module { .. } | CliError::NoModule { .. } | CliError::UnknownModule(_) | CliError::Term(_) => {
                EXIT_PARSE
            }
            _ => EXIT_FAILURE,
        }
    }
}
