use std::path::PathBuf;

/// Harness failures, grouped by the exit code they map to.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("ingestion error: {0}")]
    Ingestion(String),
    #[error("runtime error: {0}")]
    Runtime(String),
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] qransom_core::Error),
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 usage/config, 2 ingestion, 3 runtime or training.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Core(qransom_core::Error::Config(_)) => 1,
            Self::Ingestion(_) => 2,
            Self::Runtime(_) | Self::Io { .. } | Self::Core(_) => 3,
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
