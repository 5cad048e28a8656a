use std::path::PathBuf;

use crate::calendar::Month;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input files, schemas or configuration.
    Schema,
    /// Shock identification could not produce an admissible rotation.
    Identification,
    /// Numerically degenerate estimation problem.
    Estimation,
    /// Filesystem and other I/O failures.
    Io,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("duplicate observation for ({country}, {variable}, {date})")]
    DuplicateKey {
        country: String,
        variable: String,
        date: Month,
    },
    #[error("log transform of non-positive value {value} for {country} at {date} ({variable})")]
    Domain {
        country: String,
        variable: String,
        date: Month,
        value: f64,
    },
    #[error("state error: {0}")]
    State(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("degenerate covariance: {0}")]
    DegenerateCovariance(String),
    #[error("identification failure: {0}")]
    IdentificationFailure(String),
    #[error("degenerate design: {0}")]
    DegenerateDesign(String),
    #[error("insufficient sample at horizon {h}: {rows} usable rows for {columns} columns")]
    InsufficientSample { h: usize, rows: usize, columns: usize },
    #[error("inference error: {0}")]
    Inference(String),
    #[error("covariance error: {0}")]
    Covariance(String),
    #[error("degenerate test: {0}")]
    DegenerateTest(String),
    #[error("missing coefficient `{name}`: {reason}")]
    MissingCoefficient { name: String, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Schema(_)
            | Error::DuplicateKey { .. }
            | Error::Domain { .. }
            | Error::State(_)
            | Error::UnknownVariable(_)
            | Error::Config(_)
            | Error::Csv(_)
            | Error::Json(_) => ErrorKind::Schema,
            Error::DegenerateInput(_)
            | Error::DegenerateCovariance(_)
            | Error::IdentificationFailure(_) => ErrorKind::Identification,
            Error::DegenerateDesign(_)
            | Error::InsufficientSample { .. }
            | Error::Inference(_)
            | Error::Covariance(_)
            | Error::DegenerateTest(_)
            | Error::MissingCoefficient { .. } => ErrorKind::Estimation,
            Error::Io { .. } => ErrorKind::Io,
        }
    }
}
