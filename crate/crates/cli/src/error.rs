use std::path::PathBuf;

use asympolar::io::ParseError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
    #[error("invalid {what}: {detail}")]
    BadArgument { what: &'static str, detail: String },
    #[error(transparent)]
    Core(#[from] asympolar::Error),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl CliError {
    /// 1 failed check or write error, 2 parse, 3 violated precondition,
    /// 4 numeric failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Write { .. } | CliError::CheckFailed(_) => 1,
            CliError::Read { .. } | CliError::BadArgument { .. } => 2,
            CliError::Parse { source, .. } => match source {
                ParseError::Domain(e) => core_code(e),
                _ => 2,
            },
            CliError::Core(e) => core_code(e),
        }
    }
}

fn core_code(e: &asympolar::Error) -> u8 {
    if e.is_numeric() {
        4
    } else {
        3
    }
}
