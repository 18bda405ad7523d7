use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the geometry kernel and the exporters.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not Hermitian: max entry deviation {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index k = {k} out of range 0..{} for m = {m}", 2 * m)]
    IndexOutOfRange { k: i64, m: u32 },

    #[error("m = {0} is not supported, need m >= 2")]
    InvalidM(u32),

    #[error("{operation} is not defined for family {family}")]
    Unsupported {
        operation: &'static str,
        family: &'static str,
    },

    #[error("blow-up chart needs |r s| < 1, got r s = {0}")]
    Branch(f64),

    #[error("pole of the secondary Gauss map at z = {0}")]
    Pole(num_complex::Complex64),

    #[error("point is not on the {space}: residual {residual:e}")]
    OffSurface { space: &'static str, residual: f64 },

    #[error("singular point: {0}")]
    SingularPoint(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid curve request: {0}")]
    InvalidKind(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
