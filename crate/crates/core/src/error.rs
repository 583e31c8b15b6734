use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("gram matrix is not symmetric")]
    NotSymmetric,

    #[error("form has signature ({0}, {1}), expected (n, 1)")]
    BadSignature(usize, usize),

    #[error("point is off the hyperboloid: Q(x) = {0}")]
    OffHyperboloid(f64),

    #[error("point lies on the negative sheet")]
    WrongSheet,

    #[error("vector is not null: Q(v) = {0}")]
    NotNull(f64),

    #[error("tangent vector is not unit or not tangent: Q(v) = {norm}, Q(x, v) = {inner}")]
    NotUnitTangent { norm: f64, inner: f64 },

    #[error("-Q(x, y) = {0} < 1: points are not on a common sheet")]
    NotSameSheet(f64),

    #[error("ray is not forward-null with respect to the sheet: Q(x, xi) = {0}")]
    RayNotForward(f64),

    #[error("zero vector")]
    ZeroVector,

    #[error("matrix does not preserve the form (max deviation {0:e})")]
    NotFormPreserving(f64),

    #[error("matrix has determinant {0}, expected 1")]
    BadDeterminant(f64),

    #[error("matrix swaps the two sheets of the hyperboloid")]
    SwapsSheets,

    #[error("operation needs n >= {needed}, got n = {got}")]
    DimensionTooSmall { needed: usize, got: usize },

    #[error("chart parameter |t| = {0} is outside (-pi/2, pi/2)")]
    ChartDomain(f64),

    #[error("quadruple has Q = {actual}, expected {expected}")]
    FormValueMismatch { expected: BigInt, actual: BigInt },

    #[error("Q(a, b, c, x) = q has no real solution (discriminant {0})")]
    NoRealSolution(BigInt),

    #[error("root reduction did not terminate within {0} steps")]
    ReductionDiverged(usize),

    #[error("frontier memory guard exceeded; {count} items emitted before stopping")]
    MemoryGuard { count: u64 },

    #[error("coordinate {0:e} is too large for quantized deduplication")]
    QuantizationRange(f64),

    #[error("degenerate fit: {0}")]
    DegenerateFit(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("invariant violated: {0}")]
    InvariantViolation(&'static str),
}
