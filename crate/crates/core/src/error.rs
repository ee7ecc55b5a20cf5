use thiserror::Error;

/// Errors raised by the estimation and testing routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series value at index {index} is not strictly positive ({value}); cannot take logs")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("series too short: {len} observations, need at least {min}")]
    SeriesTooShort { len: usize, min: usize },

    #[error("series must contain only finite values (index {index})")]
    NonFiniteValue { index: usize },

    #[error("break date {year} is outside the admissible interior of the sample")]
    BreakOutOfRange { year: i32 },

    #[error("design matrix is rank deficient; collinear columns: {columns:?}")]
    RankDeficient { columns: Vec<String> },

    #[error("dimension mismatch: {left} rows vs {right} rows")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid model combination: {reason}")]
    InvalidModelCombination { reason: String },

    #[error("trimming fraction {trim} leaves no admissible break candidates")]
    TrimTooLarge { trim: f64 },

    #[error("sample too small: {nobs} usable observations for {params} parameters")]
    SampleTooSmall { nobs: usize, params: usize },

    #[error("no critical values available at confidence level {level}")]
    MissingCriticalValues { level: f64 },

    #[error("no bundled or cached critical-value surface covers {request}")]
    NotTabulated { request: String },

    #[error("infeasible Monte Carlo specification: {reason}")]
    InfeasibleSpec { reason: String },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("i/o failure: {0}")]
    IoFailure(#[from] std::io::Error),

    #[error("cache schema mismatch: {reason}")]
    SchemaMismatch { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
