use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown lattice name {0:?}")]
    UnknownLattice(String),
    #[error("lattice parameter must be a positive integer, got {0}")]
    NonPositiveParameter(i64),
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not an isometry of {0}")]
    NotAnIsometry(String),
    #[error("lattice {0} has no positive-definite directions")]
    NoPositiveSubspace(String),
    #[error("orientation projection is singular for an isometry of {0}")]
    SingularProjection(String),
    #[error("glue data is inconsistent: {0}")]
    BadGlue(String),
    #[error("Mukai vector lives in a different Néron–Severi lattice")]
    ContextMismatch,
    #[error("twist vector has self-pairing {0}, expected -2")]
    NotSpherical(String),
    #[error("curve class has self-intersection {0}, expected -2")]
    NotMinusTwoCurve(String),
    #[error("Néron–Severi class is not integral after halving its square: {0}")]
    OddSquare(String),
    #[error("normalization precondition failed: {0}")]
    Precondition(String),
    #[error("normalization did not terminate: {0}")]
    NoNormalization(String),
    #[error("fractional linear map has det {det} but scale {scale}")]
    BadScale { det: String, scale: String },
    #[error("composition leaves a non-integral matrix: {0}")]
    NonIntegralComposition(String),
    #[error("unsupported level n={0} for explicit generators")]
    UnsupportedLevel(i64),
    #[error("degree must be even and positive, got {0}")]
    BadDegree(i64),
    #[error("{r} is not an exact divisor of {n}")]
    NotExactDivisor { r: i64, n: i64 },
    #[error("series operation failed: {0}")]
    Series(String),
    #[error("numerical integration failed: {0}")]
    Integration(String),
    #[error("tolerance not met: {0}")]
    Tolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
