use thiserror::Error;

/// Errors raised by field models, synthesis, topology and the experiment engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown model id `{0}`")]
    UnknownModel(String),

    #[error("covariance of `{0}` is available only via numeric transform")]
    NumericCovarianceOnly(String),

    #[error("`{0}` has a singular spectral measure with no density")]
    SingularSpectrum(String),

    #[error("radius {radius} leaves the declared spectral support region of radius {support}")]
    OutsideSupport { radius: f64, support: f64 },

    #[error("non-finite derivative of the covariance at the origin")]
    NonFiniteDerivative,

    #[error("grid rule violated: {0}")]
    GridRule(String),

    #[error("spectral embedding failed: most negative cell weight {0:e}")]
    Embedding(f64),

    #[error("sample variance is zero at side {0}; level outside the field's effective range")]
    ZeroVariance(f64),

    #[error("invalid grid file: {0}")]
    Format(#[from] FormatError),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by the experiment description rather than by execution.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::Config(_) | Error::UnknownModel(_) | Error::GridRule(_) | Error::InvalidArgument(_))
    }
}

/// Structural problems found while decoding an EXLB1 grid file.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("truncated payload: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("dimension mismatch: header says {rows}x{cols}, grid spec implies {expected}x{expected}")]
    DimensionMismatch { rows: usize, cols: usize, expected: usize },
    #[error("trailing bytes after payload")]
    TrailingBytes,
    #[error("model id is not valid UTF-8")]
    InvalidModelId,
    #[error("non-finite value at index {0}")]
    NonFiniteValue(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
