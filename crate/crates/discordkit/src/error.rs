use std::path::PathBuf;

/// Harness-level failures, split by how the CLI reports them: parameter
/// problems exit 1, IO and parse problems exit 2, correctness violations
/// (exact algorithms disagreeing) exit 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Params(#[from] discordkit_core::Error),

    #[error("invalid parameters: {msg}")]
    InvalidInput { msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: cannot parse {token:?} as a number")]
    Parse {
        path: PathBuf,
        line: usize,
        token: String,
    },

    #[error("{path}: file contains no data points")]
    EmptyFile { path: PathBuf },

    #[error("{path}:{line}: {msg}")]
    Config {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("correctness violation: {0}")]
    Correctness(String),
}

impl Error {
    /// Process exit code mandated for this failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Params(_) | Error::InvalidInput { .. } => 1,
            Error::Io { .. } | Error::Parse { .. } | Error::EmptyFile { .. }
            | Error::Config { .. } => 2,
            Error::Correctness(_) => 3,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput { msg: msg.into() }
    }
}
