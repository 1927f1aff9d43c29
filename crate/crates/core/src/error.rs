use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix is not special unitary (|det - 1| = {0:.3e})")]
    NotSpecialUnitary(f64),
    #[error("Gram-Schmidt seed is degenerate (residual norm {0:.3e})")]
    DegenerateSeed(f64),
    #[error("gave up after {0} degenerate Gram-Schmidt draws")]
    ResamplingExhausted(usize),
    #[error("locality k = {0} is outside 1..=4")]
    InvalidLocality(u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A numerical self-check failed; this signals a bug rather than bad input.
    #[error("numerical assertion failed: {0}")]
    Numerical(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidLocality(_) | Error::InvalidParameter(_) => 2,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => 1,
            _ => 3,
        }
    }
}
