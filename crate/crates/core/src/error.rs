use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    /// Index sets of a generic rectangle cannot be enumerated exactly.
    #[error("the spectrum of a generic rectangle is not exactly enumerable")]
    NotExactlyEnumerable,

    #[error("cannot lift the zero function to the square")]
    EmptyLift,

    /// Constant eigenfunctions are the one case where no boundary witness exists.
    #[error("eigenfunction is constant; no non-positivity witness exists")]
    ConstantEigenfunction,

    #[error("inconsistent spectrum: {0}")]
    InconsistentSpectrum(String),

    #[error("numerically inconclusive after {samples} samples (best value {best:e})")]
    NumericalInconclusive { samples: usize, best: f64 },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
