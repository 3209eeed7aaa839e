use std::path::PathBuf;

/// Failures that abort a command before a report is produced.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    /// Process exit status: 2 for usage, 3 for I/O, 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Numerical(_) => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<lumpspace::Error> for CliError {
    fn from(e: lumpspace::Error) -> Self {
        match e {
            lumpspace::Error::Usage(_) | lumpspace::Error::Domain(_) => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

pub fn usage(msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("usage error: {msg}"))
}
