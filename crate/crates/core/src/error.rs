use thiserror::Error;

/// Errors raised by matgeo operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("field mismatch: operands must both be real or both complex")]
    FieldMismatch,
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("matrix is singular or ill-conditioned (condition estimate {condition:.3e})")]
    Singular { condition: f64 },
    #[error("matrix is not self-adjoint (residual {residual:.3e})")]
    NotSelfAdjoint { residual: f64 },
    #[error("matrix is not positive-definite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("matrix is not normal (commutator residual {residual:.3e})")]
    NotNormal { residual: f64 },
    #[error("matrix is not orthogonal/unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("orthogonal matrix has determinant -1; no real antisymmetric logarithm exists")]
    NoRealAntisymmetricLog,
    #[error("basis is not orthonormal (residual {residual:.3e})")]
    NotOrthonormal { residual: f64 },
    #[error("{what} did not converge; value bracketed in [{lower:.17e}, {upper:.17e}]")]
    NoConvergence { what: &'static str, lower: f64, upper: f64 },
    #[error("{what} did not converge (residual {residual:.3e})")]
    DidNotConverge { what: &'static str, residual: f64 },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("point is not a member of {group}: residual {residual:.3e}")]
    NotInGroup { group: String, residual: f64 },
    #[error("direction is not admissible for {group}: residual {residual:.3e}")]
    InadmissibleDirection { group: String, residual: f64 },
    #[error("malformed flag: {0}")]
    MalformedFlag(String),
    #[error("contraction required: operator norm {norm} is not < 1")]
    NotContraction { norm: f64 },
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("point is outside affine chart {chart}")]
    NotInChart { chart: usize },
    #[error("input vectors are linearly dependent (rank {rank} < {expected})")]
    LinearlyDependent { rank: usize, expected: usize },
    #[error("subspaces are not complementary (condition estimate {condition:.3e})")]
    NotComplementary { condition: f64 },
    #[error("homogeneous forms share a projective zero (resultant {resultant:.3e})")]
    ResultantZero { resultant: f64 },
    #[error("point is off the manifold (residual {residual:.3e})")]
    OffManifold { residual: f64 },
    #[error("vector is not tangent to the target (residual {residual:.3e})")]
    NotTangent { residual: f64 },
    #[error("starting point does not lie over the base path start (residual {residual:.3e})")]
    OffFiber { residual: f64 },
    #[error("lifted path left the trust region at t = {t} (condition estimate {condition:.3e})")]
    LeftTrustRegion { t: f64, condition: f64 },
    #[error("integration step {step} exceeds the maximum {max}")]
    StepTooLarge { step: f64, max: f64 },
    #[error("base path is not closed (gap {gap:.3e})")]
    NotClosed { gap: f64 },
    #[error("exponent p must be positive, got {0}")]
    InvalidExponent(f64),
    #[error("metric tags differ")]
    MetricMismatch,
    #[error("duplicate domain point at samples {0} and {1}")]
    DuplicatePoint(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
