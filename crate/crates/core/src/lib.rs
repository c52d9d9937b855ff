//! Best coapproximations to real square matrices out of subspaces of
//! diagonal matrices.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`subspace::build_component_table`] lays the basis out as an `n × m`
//!    matrix of components and groups components that agree up to sign.
//! 2. [`subspace::star_report`] decides, per group, whether some coefficient
//!    vector makes that component strictly dominate all others in absolute
//!    value, by exact linear programming.
//! 3. [`numerical_range`] computes the real numerical range of the signed
//!    principal submatrix of the target attached to each dominating group.
//! 4. [`solver::solve_constraints`] intersects the resulting interval
//!    constraints and reports the full solution polyhedron.
//!
//! [`oracle`] checks answers independently, straight from the definition and
//! from Birkhoff-James orthogonality.

pub mod linalg;
pub mod numerical_range;
pub mod oracle;
pub mod par;
pub mod scalar;
pub mod solver;
pub mod subspace;

pub use linalg::{KernelError, Rational};
pub use par::Execution;
pub use scalar::Scalar;
pub use solver::{coapprox, linf_coapprox, CoapproxReport, SolutionKind, SolutionSet, SolverOptions};
pub use subspace::{Basis, Classification, ComponentTable, DiagonalMatrix, StarReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoapproxError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("basis is empty")]
    EmptyBasis,
    #[error("dependent basis: rank {rank} < {m} basis elements")]
    DependentBasis { rank: usize, m: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("class {0} is the zero class")]
    ZeroClass(usize),
    #[error("no class with id {0}")]
    UnknownClass(usize),
    #[error("direction is the zero matrix")]
    ZeroDirection,
    #[error("matrix is not orthogonal (max deviation {0:e})")]
    NotOrthogonal(f64),
    #[error("matrix {index} is not diagonalized (max off-diagonal {deviation:e})")]
    NotSimultaneouslyDiagonalized { index: usize, deviation: f64 },
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolated(String),
}

pub type Result<T, E = CoapproxError> = std::result::Result<T, E>;
