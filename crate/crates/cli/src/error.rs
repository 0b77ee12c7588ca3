use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{key}: {message}")]
    Config { key: String, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {message}", path.display())]
    Table { path: PathBuf, line: usize, message: String },
    #[error("{}: {source}", path.display())]
    TomlSyntax {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("scenario {scenario}: {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: hybrid_link_core::Error,
    },
    #[error(transparent)]
    Core(#[from] hybrid_link_core::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for Raman solver failures, 1 for everything a user can fix in the inputs.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(e) | Self::Scenario { source: e, .. } if e.is_solver_failure() => 2,
            _ => 1,
        }
    }
}
