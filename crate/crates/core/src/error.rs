use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("matrix is singular (pivot {pivot:.3e} below threshold)")]
    SingularMatrix { pivot: f64 },
    #[error("matrix is rank deficient (diagonal {diag:.3e} below rank tolerance)")]
    RankDeficient { diag: f64 },
    #[error("{op} did not converge within {iterations} iterations")]
    NoConvergence { op: &'static str, iterations: usize },
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("non-positive power of a singular positive semidefinite matrix")]
    SingularBase,
    #[error("matrix is defective or ill-conditioned (eigenvector condition {condition:.3e}); supply a Jordan spec")]
    DefectiveOrIllConditioned { condition: f64 },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("index sets have different sizes ({rows} rows, {cols} cols)")]
    SizeMismatch { rows: usize, cols: usize },
    #[error("non-finite entry produced by {op}")]
    NonFinite { op: &'static str },
    #[error("invalid Jordan spec: {0}")]
    InvalidSpec(String),
    #[error("Jordan basis M is singular")]
    SingularM,
    #[error("C must be nonsingular")]
    SingularC,
    #[error("B must be nonsingular")]
    SingularB,
    #[error("L must be nonsingular")]
    SingularL,
    #[error("scaled power overflows (log magnitude {log_magnitude:.3e})")]
    Overflow { log_magnitude: f64 },
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("growth estimate {estimate:.6e} does not match any modulus (nearest {nearest:?})")]
    AmbiguousClassification { estimate: f64, nearest: Vec<f64> },
    #[error("numeric classification j={numeric} disagrees with membership test j={membership}")]
    ClassificationMismatch { numeric: usize, membership: usize },
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("element is not in SL(n,R): {0}")]
    NotInSl(String),
}

impl Error {
    /// Numeric failures (as opposed to violated preconditions on the inputs).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::Overflow { .. }
                | Error::NonFinite { .. }
                | Error::ClassificationMismatch { .. }
        )
    }
}
