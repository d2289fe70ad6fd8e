use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qsceom::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("config key '{key}': {message}")]
    Invalid { key: String, message: String },
    #[error("missing fixture {0}")]
    MissingFixture(PathBuf),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn invalid(key: &str, message: String) -> Self {
        Self::Invalid {
            key: key.to_string(),
            message,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
