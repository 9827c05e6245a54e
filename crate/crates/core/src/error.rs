use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("a set of positive measure is required, got an empty set")]
    EmptySet,

    #[error("coordinate {0} lies outside [0, 1]")]
    OutOfDomain(f64),

    #[error("composition power m = 0 is the identity operator and has no kernel")]
    ZeroPower,

    #[error("matrix exponential overflowed (input 1-norm {norm:.3e})")]
    Overflow { norm: f64 },

    #[error(
        "t = {t:.3e} violates the convergence guard: |t|*K*n = {value:.3e} must stay below the radius {radius}"
    )]
    ConvergenceGuard { t: f64, value: f64, radius: f64 },

    #[error("Taylor coefficient {k} of family `{family}` is zero")]
    ZeroCoefficient { family: String, k: usize },

    #[error("heat expectation is not positive at t = {t:.3e}; no finite slope")]
    NonPositive { t: f64 },

    #[error("exact cut norm enumerates 2^n subsets and is limited to {max} blocks, got {n}; coarsen first")]
    TooManyBlocks { n: usize, max: usize },

    #[error("graphon is not connected")]
    Disconnected,

    #[error("weight matrix zero pattern differs from the adjacency at ({i}, {j})")]
    ZeroPattern { i: usize, j: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Process exit code: 2 for bad input, 3 for math-domain failures, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_)
            | Error::DimensionMismatch { .. }
            | Error::EmptySet
            | Error::OutOfDomain(_)
            | Error::ZeroPower
            | Error::ZeroPattern { .. }
            | Error::ZeroCoefficient { .. }
            | Error::TooManyBlocks { .. }
            | Error::Json(_) => 2,
            Error::Overflow { .. }
            | Error::ConvergenceGuard { .. }
            | Error::NonPositive { .. }
            | Error::Disconnected => 3,
            Error::Io(_) | Error::Csv(_) => 4,
        }
    }
}
