use std::path::PathBuf;
use thiserror::Error;

/// Pipeline-level errors, grouped by the exit code they map to.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("data error in {path}: {source}")]
    Data {
        path: PathBuf,
        #[source]
        source: DataError,
    },

    #[error("numerical failure: {0}")]
    Numerical(#[from] longrun::Error),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 2 config, 3 data, 4 numerical/i-o.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data { .. } => 3,
            CliError::Numerical(_) => 4,
            CliError::Io(_) => 4,
        }
    }
}

/// Ingestion diagnostics with row/column accuracy.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("malformed csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("row {row}, column `{column}`: {message}")]
    Schema {
        row: usize,
        column: String,
        message: String,
    },

    #[error("missing year {year}: years must be strictly consecutive")]
    GapInYears { year: i32 },
}

pub type Result<T> = std::result::Result<T, CliError>;
