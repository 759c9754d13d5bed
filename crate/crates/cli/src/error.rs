use std::fmt;
use std::path::PathBuf;

/// Failure classes, each with its own process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    InvalidQuery(String),
    Io { path: PathBuf, source: std::io::Error },
    CorruptIndex { path: PathBuf, source: cooc::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::InvalidQuery(_) => 3,
            CliError::Io { .. } => 4,
            CliError::CorruptIndex { .. } => 5,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::InvalidQuery(msg) => write!(f, "invalid query set: {msg}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::CorruptIndex { path, source } => write!(f, "{}: corrupt index: {source}", path.display()),
        }
    }
}

impl std::error::Error for CliError {}
