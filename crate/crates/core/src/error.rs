use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("negative value: {0}")]
    NegativeValue(String),
    #[error("marginal utilities must be nonincreasing in the unit index: {0}")]
    NonMonotoneMarginals(String),
    #[error("storage cost table is not concave: {0}")]
    NonConcaveStorage(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("period {period} out of range 1..={periods}")]
    PeriodOutOfRange { period: usize, periods: usize },
    #[error("period {period} precedes contour period {contour_period}")]
    PeriodBeforeContour { period: usize, contour_period: usize },
    #[error("operation requires linear storage costs")]
    ConcaveNotSupported,
    #[error("operation requires a single buyer")]
    MultiBuyerNotSupported,
    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),
    #[error("state space too large: {0}")]
    StateSpaceTooLarge(String),
    #[error("inventory bound exceeded: {0}")]
    InventoryBoundExceeded(String),
    #[error("infeasible action: {0}")]
    InfeasibleAction(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("cannot parse {0:?} as a rational")]
    ParseRational(String),
    #[error("invalid instance file: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
