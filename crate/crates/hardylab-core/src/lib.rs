//! Numerical laboratory for composition-operator reflections on a truncated
//! Hardy space: disk-automorphism point maps, the operator matrices they
//! induce, polar and spectral structure, and the geometry of their
//! eigenspaces.

pub mod error;
pub mod hardy;
pub mod linalg;
pub mod moebius;
pub mod polar;
pub mod spectral;
pub mod compose;
pub mod subspace;
pub mod toeplitz;

pub use error::{CoreError, Result};
pub use hardy::HardyVector;
pub use linalg::OperatorMatrix;
pub use moebius::{DiskPoint, MoebiusMap};
pub use toeplitz::SymbolFourier;
