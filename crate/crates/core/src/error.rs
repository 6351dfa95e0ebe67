use thiserror::Error;

/// Errors produced by the library.
///
/// Scalars carried for reporting are stored as `f64` regardless of the
/// working precision.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operator must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("map is not completely positive (Choi min eigenvalue {min_eigenvalue:e})")]
    NotCp { min_eigenvalue: f64 },
    #[error("generator is not dCP (compressed Choi min eigenvalue {min_eigenvalue:e})")]
    NotDcp { min_eigenvalue: f64 },
    #[error("generator Choi matrix is not hermitian (defect {defect:e})")]
    NonHermitianChoi { defect: f64 },
    #[error("presentation is not minimal: {0}")]
    NotMinimal(String),
    #[error("operator is not hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("operator is not an orthogonal projection (defect {defect:e})")]
    NotProjection { defect: f64 },
    #[error("intermediate form block is not positive (min eigenvalue {min_eigenvalue:e})")]
    InconsistentBlock { min_eigenvalue: f64 },
    #[error("time arguments out of order or out of range: {0}")]
    TimeMismatch(String),
    #[error("schedule evaluation failed at t = {t}: {reason}")]
    Schedule { t: f64, reason: String },
    #[error("dimension {n} is not part of the filtration")]
    NotInFiltration { n: usize },
    #[error("sequence is not adapted to the filtration at level {n}")]
    NotAdapted { n: usize },
    #[error("sequence is not projective between levels {n} and {m} (defect {defect:e})")]
    NotProjective { n: usize, m: usize, defect: f64 },
    #[error("norm bound violated at level {n}: {norm} > {bound}")]
    NormBoundViolated { n: usize, norm: f64, bound: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
