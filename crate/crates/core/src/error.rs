use thiserror::Error;

/// Errors raised by the linear-algebra substrate, the metrology engine, the
/// orthonormal reference path, and the cat-state model builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("eigen/singular value iteration did not converge")]
    ConvergenceFailure,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("no candidate ket survived the independence test")]
    EmptyBasis,
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("model invariant violated: {0}")]
    ModelInvariantViolation(String),
    #[error("Lyapunov solve failed for parameter {parameter}: residual {residual:.3e}")]
    SolverFailure { parameter: String, residual: f64 },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("metric is singular at the condition cap (condition number {0:.3e})")]
    SingularMetric(f64),
    #[error("QFI matrix is singular at the condition cap (condition number {0:.3e})")]
    SingularQfi(f64),
    #[error("weight matrix is not symmetric positive definite")]
    BadWeight,
    #[error("every eigenvalue pair lies below the floor")]
    DegenerateFloor,
    #[error("unsupported derivative order {0}")]
    UnsupportedDerivativeOrder(u8),
    #[error("basis is degenerate at these parameters: {0}")]
    DegenerateBasis(String),
    #[error("rank change at c = 1: the QFI for the coherence parameter diverges")]
    RankChange,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
