use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} is not a power of an odd prime")]
    NotOddPrimePower(u64),
    #[error("extension degree must be at least 1, got {0}")]
    InvalidDegree(u32),
    #[error("field order {0} is too large for table-driven arithmetic")]
    FieldTooLarge(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("modulus {0:?} is reducible over F_p")]
    ReducibleModulus(Vec<u32>),
    #[error("invalid field element coefficients {0:?}")]
    InvalidElement(Vec<u32>),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("discrete logarithm of zero")]
    ZeroLog,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension must be at least {min}, got {got}")]
    DimensionTooSmall { got: usize, min: usize },
    #[error("point is not on the unit sphere")]
    NotOnSphere,
    #[error("vector is isotropic (Q(x) = 0) and spans no square-type line")]
    Isotropic,
    #[error("Q(x) is a non-square; the line is not of square type")]
    NonSquareType,
    #[error("input set is empty")]
    EmptyInput,

    #[error("relation index {i} out of range 1..={max}")]
    RelationOutOfRange { i: usize, max: usize },
    #[error("a line paired with itself has no relation index")]
    DiagonalPair,
    #[error("graph for relation {relation} is irregular (degrees {min}..{max})")]
    Irregular { relation: usize, min: usize, max: usize },
    #[error("|Omega| = {n} exceeds the guard {limit}")]
    GuardExceeded { n: usize, limit: usize },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("largest eigenvalue {largest} differs from the valency {valency}")]
    PerronMismatch { largest: f64, valency: f64 },

    #[error("vertex index {index} out of range for {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("subset size {size} out of range 1..={max}")]
    SubsetSize { size: usize, max: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
