//! Dense complex linear algebra for small square matrices.
//!
//! Everything here is self-contained: LU with partial pivoting, a cyclic
//! Jacobi solver for Hermitian matrices, Hessenberg reduction followed by
//! shifted QR for general spectra, the top singular pair, support-function
//! sampling of the numerical range and Arnoldi-style Krylov compressions.
//! Dimensions are expected to stay below a few dozen.

mod eigen;
mod hermitian;
mod krylov;
mod lu;
mod matrix;
mod range;
mod svd;

pub use eigen::{eigenvector, spectral_radius, spectrum};
pub use hermitian::{herm_max_eig, herm_min_eig, hermitian_eigen, HermitianEigen};
pub use krylov::{krylov_compress, KrylovCompression};
pub use lu::{inverse, Lu};
pub use matrix::{inner, normalize, vec_norm, ComplexMatrix, MatrixLiteral};
pub use range::{numerical_radius, numerical_range, support_value, RangePolygon};
pub use svd::{gram_residual, op_norm, top_singular_pair, SingularPair};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix must be non-empty")]
    Empty,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is singular at pivot {pivot}")]
    Singular { pivot: usize },
    #[error("matrix is not Hermitian: ‖H - H*‖ = {defect:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { defect: f64, tolerance: f64 },
    #[error("eigenvalue iteration did not converge after {iterations} iterations (active block ending at {index})")]
    NoConvergence { iterations: usize, index: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("at least {min} angles required, got {got}")]
    TooFewAngles { min: usize, got: usize },
}
