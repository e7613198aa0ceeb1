use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseDecimalError {
    #[error("empty decimal string")]
    Empty,
    #[error("invalid decimal string {0:?}")]
    Invalid(String),
    #[error("decimal exponent out of range")]
    ExponentRange,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseDecimalError),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a machine integer")]
    NotAnInteger(String),

    #[error("n must be ≥ 1")]
    ZeroSteps,
    #[error("index {index} outside trajectory 0..={n}")]
    IndexOutOfRange { index: u64, n: u64 },
    #[error("trajectory value at k={0} was not retained")]
    NotRetained(u64),
    #[error("initial scale must be nonzero to form ratios")]
    ZeroScale,

    #[error("n={n} exceeds the {limit} iteration cap of float-multiply-loop")]
    TooManyIterations { n: u64, limit: u64 },
    #[error("n={n} exceeds the float evaluation limit {limit}")]
    StepTooSmall { n: u64, limit: u64 },
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("precision {precision} exceeds reference digits {ref_digits}")]
    PrecisionExceedsReference { precision: u32, ref_digits: u32 },
    #[error("unknown arithmetic mode {0:?}")]
    UnknownMode(String),

    #[error("convergence order needs positive errors")]
    NonPositiveError,
    #[error("at least one error row is required")]
    EmptyRows,
    #[error("extrapolation needs steps n and 2n, got {coarse} and {fine}")]
    MismatchedSteps { coarse: u64, fine: u64 },
    #[error("sweep grid out of range: {0}")]
    GridOutOfRange(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
