use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },
    #[error("{0}")]
    Infeasible(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] subgauss::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use subgauss::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) | CliError::Parse { .. } | CliError::Io { .. } => 3,
            CliError::Infeasible(_) => 4,
            CliError::Core(e) => match e {
                E::InvalidParameter { .. } | E::UnsupportedDistribution { .. } => 2,
                _ => 3,
            },
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
