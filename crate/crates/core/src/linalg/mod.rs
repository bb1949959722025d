//! Dense linear algebra kernel.
//!
//! Row-major dense matrices and vectors, the Kronecker product, a cyclic
//! Jacobi eigensolver for symmetric matrices, a Hessenberg QR path for
//! general real matrices, and Gaussian elimination used as the independent
//! direct-solve oracle for everything else.

mod eigen;
mod general;
mod matrix;
mod solve;

pub use eigen::{sym_eigen, EigenResult};
pub use general::{general_eigenvalues, spectrum_distance};
pub use matrix::{kron, DenseMatrix, DenseVector};
pub use solve::{direct_solve, rank};

pub use num_complex::Complex;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("eigensolver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("matrix is singular (pivot {pivot:e} in column {column})")]
    Singular { column: usize, pivot: f64 },
}
