use thiserror::Error;

/// Errors shared across the numerical modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    /// A point was rejected by the open-unit-disk constraint.
    #[error("point with modulus {modulus} is not inside the open unit disk")]
    OutsideDisk { modulus: f64 },

    /// A Möbius evaluation hit (or grazed) the pole of the map.
    #[error("Möbius denominator vanishes at the requested point (|den| = {denominator})")]
    PoleAtPoint { denominator: f64 },

    /// An operation that divides by the base point received zero.
    #[error("operation undefined at the origin")]
    ZeroBase,

    /// Two operands were built at different truncation orders.
    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    /// A matrix expected to be hermitian was not, beyond tolerance.
    #[error("matrix is not hermitian (max asymmetry {defect})")]
    NotHermitian { defect: f64 },

    /// A matrix expected positive semidefinite had a significantly negative eigenvalue.
    #[error("matrix has negative eigenvalue {eigenvalue}")]
    IndefiniteInput { eigenvalue: f64 },

    /// A linear solve or inversion met a (numerically) singular matrix.
    #[error("matrix is numerically singular")]
    SingularInput,

    /// Quadrature failed to produce a finite value.
    #[error("quadrature produced a non-finite value")]
    QuadratureFailure,

    /// Orthonormalization lost rank: the generating vectors are too close to dependent.
    #[error("basis generation lost rank at column {column} (pivot {pivot})")]
    RankLoss { column: usize, pivot: f64 },

    /// A named runtime assertion failed; carries the measured value and its bound.
    #[error("assertion '{name}' failed: {value} exceeds {bound}")]
    AssertionFailure { name: String, value: f64, bound: f64 },

    /// Direct rotation requested for subspaces that are not in generic position.
    #[error("subspaces are not in generic position: intersection dims {dim_left} / {dim_right}")]
    GenericPositionViolated { dim_left: usize, dim_right: usize },
}

pub type Result<T> = std::result::Result<T, CoreError>;
