//! Dense complex linear algebra, ODE stepping and spectral checks.
//!
//! Everything here works on small dense matrices (dimension ≤ 64 in practice),
//! so the routines favour straightforward loops over blocked kernels.

mod eigen;
mod expm;
mod matrix;
mod ode;
pub mod tol;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use expm::expm;
pub use matrix::{ComplexMatrix, RealVector};
pub use ode::rk4_step;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("dimension mismatch in {op}: {lhs:?} vs {rhs:?}")]
    DimensionMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("matrix is not Hermitian: max |A - A^H| = {residual:e} exceeds {tol:e}")]
    NotHermitian { residual: f64, tol: f64 },
    #[error("expected {expected} entries, got {got}")]
    BadLength { expected: usize, got: usize },
}
