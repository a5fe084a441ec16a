use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid or unsupported parameters (e.g. a Bessel order outside the supported set).
    #[error("configuration error: {0}")]
    Config(String),

    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An iterative or quadrature procedure failed to reach its tolerance.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A generator could not produce the requested configuration.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The Fisher information is numerically singular.
    #[error("singular Fisher information: lambda_min = {lambda_min:e}, lambda_max = {lambda_max:e}")]
    Singular { lambda_min: f64, lambda_max: f64 },

    /// A lattice sum could not be truncated within tolerance.
    #[error("truncation error: tail estimate {tail:e} exceeds {limit:e}")]
    Truncation { tail: f64, limit: f64 },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
