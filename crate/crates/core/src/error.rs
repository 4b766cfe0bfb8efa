use thiserror::Error;

/// Process exit code for configuration and parameter problems.
pub const EXIT_CONFIG: i32 = 2;
/// Process exit code for tripped numerical guards (wraparound, overflow-scale grids).
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config error: {0}")]
    Config(String),

    /// Sampling grids that cannot represent the requested structure.
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    /// Guards against silently wrong numerics (FFT wraparound, runaway sample counts).
    #[error("numerical guard: {0}")]
    NumericalGuard(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) | Error::Config(_) => EXIT_CONFIG,
            Error::GridTooCoarse(_) | Error::NumericalGuard(_) => EXIT_NUMERICAL,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
