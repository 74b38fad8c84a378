use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("index ({row}, {col}) out of range for dimension {n}")]
    IndexOutOfRange { row: usize, col: usize, n: usize },

    #[error("skew symmetric operators require real data")]
    ComplexSkewData,

    #[error("operator is {operator:?} but the solver was asked for {requested:?}")]
    VariantMismatch {
        operator: crate::SymmetryClass,
        requested: crate::SymmetryClass,
    },

    #[error("shift {re}+{im}i breaks the {variant:?} structure")]
    InvalidShift {
        re: f64,
        im: f64,
        variant: crate::SymmetryClass,
    },

    #[error("operator failed the {0:?} symmetry probe")]
    NotStructured(crate::SymmetryClass),

    #[error("preconditioner breakdown at iteration {iteration}: qᵀz = {re}+{im}i")]
    PreconditionerBreakdown { iteration: usize, re: f64, im: f64 },

    #[error("preconditioner diagonal entry {index} is zero")]
    SingularPreconditioner { index: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
