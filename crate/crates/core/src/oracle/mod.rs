//! Dense reference computations and structured random problem generators.

mod dense;
mod generators;

pub use dense::{dense_qlp, householder_qr, tsvd_solve, DenseMatrix};
pub use generators::{
    gen_cs_spectrum_imaginary, gen_cs_spread, gen_skew_hermitian, gen_skew_symmetric,
    random_orthogonal, GeneratedProblem, Suite,
};
