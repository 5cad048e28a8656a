use std::path::PathBuf;

use signlp::ErrorKind;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] signlp::Error),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("no horizon could be estimated")]
    NothingEstimated,
    #[error("{0} invariant check(s) failed")]
    CheckFailed(usize),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 0 success, 1 failed checks, 2 schema or configuration, 3 shock
    /// identification, 4 degenerate estimation.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Schema | ErrorKind::Io => 2,
                ErrorKind::Identification => 3,
                ErrorKind::Estimation => 4,
            },
            CliError::Config(_) | CliError::Io { .. } | CliError::Json(_) => 2,
            CliError::NothingEstimated => 4,
            CliError::CheckFailed(_) => 1,
        }
    }
}
