use thiserror::Error;

/// Errors raised by the projection, estimation and backtesting routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare { rows: usize, row: usize, cols: usize },

    #[error("matrix is not symmetric: max |m[i][j] - m[j][i]| = {max_asymmetry:e}")]
    NotSymmetric { max_asymmetry: f64 },

    #[error("matrix is not positive definite: Cholesky pivot {pivot_index} is {pivot:e} (floor {floor:e})")]
    NotPositiveDefinite {
        pivot_index: usize,
        pivot: f64,
        floor: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("singular linear system: pivot {pivot_index} below threshold")]
    SingularSystem { pivot_index: usize },

    #[error("degenerate two-asset metric: denominator v1 + v2 - 2 cov = {denominator:e}")]
    DegenerateMetric { denominator: f64 },

    #[error("dimension {n} exceeds the recursion guard of {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("invalid face: {0}")]
    InvalidFace(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("too few samples: need at least {required}, got {actual}")]
    TooFewSamples { required: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: u64, reason: String },

    #[error("non-positive price {price} for asset {asset} on {date}")]
    NonPositivePrice {
        asset: String,
        date: String,
        price: f64,
    },

    #[error("empty panel: {0}")]
    EmptyPanel(String),

    #[error("benchmark misaligned with panel: {0}")]
    MisalignedBenchmark(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of the numerical machinery itself, as opposed to
    /// inputs that violate a documented precondition.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularSystem { .. } | Error::DegenerateMetric { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
