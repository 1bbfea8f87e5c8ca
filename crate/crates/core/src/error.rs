use thiserror::Error;

/// Errors produced by the workbench.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("operator is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("not a density operator: {0}")]
    NotAState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("joint dimension {0} exceeds the supported maximum of {max}", max = crate::tol::MAX_JOINT_DIM)]
    TooLarge(usize),

    #[error("set too large for desk scale (field degree {0} > 16)")]
    SetTooLarge(u32),

    #[error("operator is not supported on the reference operator's support")]
    SupportViolation,

    #[error("subsystem `{0}` is not classical (off-block mass {1:.3e})")]
    NotClassical(String, f64),

    #[error(
        "min-entropy solver did not converge after {iterations} iterations \
         (2^-H bracketed in [{lower:.9e}, {upper:.9e}])"
    )]
    NonConvergence {
        iterations: usize,
        lower: f64,
        upper: f64,
    },

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
