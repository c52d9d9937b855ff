//! Linear-algebra kernel: exact rationals, dense matrices, the simplex, the
//! Jacobi eigensolver, spectral norms and exact row reduction.

pub mod eigen;
pub mod lp;
pub mod matrix;
pub mod rational;
pub mod reduce;
mod small;

pub use eigen::{certify_eigen_interval, symmetric_eigen, symmetric_eigen_interval, SymmetricEigen};
pub use lp::{minimize_lp, solve_lp, Constraint, LpOutcome, LpScalar, LpStatus, Relation, LP_EPS};
pub use matrix::{dot, FloatMatrix, Interval, Matrix, RatMatrix};
pub use rational::{parse_rational, Rational};
pub use reduce::{nullspace, rank, rref, solve_exact, spectral_norm};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("empty matrix")]
    Empty,
    #[error("simplex exceeded {0} pivots")]
    CycleGuardExceeded(usize),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}
