//! Minimum-residual Krylov solvers for structured, possibly singular systems.
//!
//! The crate solves `A x ≈ b` for complex symmetric (`A = Aᵀ`), skew
//! symmetric (`A = -Aᵀ`, real), skew Hermitian (`A = -A*`) and Hermitian
//! operators. On singular or inconsistent problems the QLP phase returns the
//! minimum-length least-squares solution `x† = A† b`.
//!
//! ```
//! use symkrylov::{solve, Scalar, SolverConfig, SparseMatrix, SparseOperator, SymmetryClass};
//!
//! let i = Scalar::new(0.0, 1.0);
//! let a = SparseMatrix::from_triplets(2, &[(0, 0, i)]).unwrap();
//! let op = SparseOperator::new(a, SymmetryClass::ComplexSymmetric).unwrap();
//! let b = vec![i, i];
//! let report = solve(&op, &b, &SolverConfig::for_dim(2, SymmetryClass::ComplexSymmetric)).unwrap();
//! assert!((report.x[0] - Scalar::new(1.0, 0.0)).norm() < 1e-12);
//! assert!(report.x[1].norm() < 1e-12);
//! ```

mod error;
pub mod lanczos;
pub mod linalg;
pub mod operator;
pub mod oracle;
pub mod precond;
pub mod reflect;
pub mod solver;
pub mod sparse;

pub use error::{Error, Result};
pub use lanczos::{LanczosColumn, TridiagState};
pub use linalg::{axpy, inner_h, inner_t, Scalar, Vector, EPS};
pub use operator::{probe_symmetry, LinearOperator, SparseOperator, SymmetryClass};
pub use precond::{jacobi_from_matrix, Preconditioner};
pub use reflect::{sym_ortho, Reflection};
pub use solver::{
    solve, solve_with_monitor, IterationInfo, Phase, SolveReport, SolverConfig, StopReason,
};
pub use sparse::{sparse_apply, SparseMatrix};
