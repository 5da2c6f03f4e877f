use thiserror::Error;

/// Errors raised by the symbol calculus, the oscillator backend and the
/// reconstruction algorithms.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("transport order {requested} exceeds bound {bound}")]
    OrderTooLarge { requested: usize, bound: usize },
    #[error("exponential symbols with different rates cannot be multiplied")]
    RateMismatch,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error(
        "cluster overlap: eigenvalue {energy} is {offset:e} from level {level} (limit {limit:e})"
    )]
    ClusterOverlap {
        energy: f64,
        level: i64,
        offset: f64,
        limit: f64,
    },
    #[error("weight support exceeds trusted window: {0}")]
    WindowExceeded(String),
    #[error("ill-conditioned system (condition number {0:e})")]
    IllConditioned(f64),
    #[error("rank deficient system (smallest scaled singular value {0:e})")]
    RankDeficient(f64),
    #[error("quadrature did not converge: relative gap {0:e}")]
    Quadrature(f64),
    #[error("residual {residual:e} above tolerance {tolerance:e}: {context}")]
    Residual {
        residual: f64,
        tolerance: f64,
        context: String,
    },
    #[error("genericity violated: {0}")]
    Genericity(String),
    #[error("unsupported query: {0}")]
    Unsupported(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
