//! The operator abstraction consumed by the solvers.

use crate::linalg::{dot_h, dot_t, norm, Scalar, ZERO};
use crate::sparse::SparseMatrix;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryClass {
    /// `A = Aᵀ`, complex entries allowed.
    ComplexSymmetric,
    /// `A = -Aᵀ` with real entries.
    SkewSymmetric,
    /// `A = -A*`.
    SkewHermitian,
    /// `A = A*`.
    Hermitian,
}

impl SymmetryClass {
    pub fn short_name(self) -> &'static str {
        match self {
            SymmetryClass::ComplexSymmetric => "cs",
            SymmetryClass::SkewSymmetric => "ss",
            SymmetryClass::SkewHermitian => "sh",
            SymmetryClass::Hermitian => "hermitian",
        }
    }

    pub fn from_short_name(s: &str) -> Option<Self> {
        match s {
            "cs" => Some(SymmetryClass::ComplexSymmetric),
            "ss" => Some(SymmetryClass::SkewSymmetric),
            "sh" => Some(SymmetryClass::SkewHermitian),
            "hermitian" | "he" => Some(SymmetryClass::Hermitian),
            _ => None,
        }
    }
}

/// Matrix action `y = A x`. The effective operator seen by the solver is
/// `A - σI` with `σ = shift()`.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn symmetry(&self) -> SymmetryClass;
    /// Writes `A x` into `y`; both slices have length `dim()`.
    fn apply(&self, x: &[Scalar], y: &mut [Scalar]);
    fn shift(&self) -> Scalar {
        ZERO
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn symmetry(&self) -> SymmetryClass {
        (**self).symmetry()
    }
    fn apply(&self, x: &[Scalar], y: &mut [Scalar]) {
        (**self).apply(x, y)
    }
    fn shift(&self) -> Scalar {
        (**self).shift()
    }
}

#[derive(Debug, Clone)]
pub struct SparseOperator {
    matrix: SparseMatrix,
    symmetry: SymmetryClass,
    shift: Scalar,
}

impl SparseOperator {
    /// Tags `matrix` with a symmetry class. The tag is not verified here;
    /// see [`probe_symmetry`].
    pub fn new(matrix: SparseMatrix, symmetry: SymmetryClass) -> Result<Self> {
        if symmetry == SymmetryClass::SkewSymmetric && !matrix.is_real() {
            return Err(Error::ComplexSkewData);
        }
        Ok(SparseOperator {
            matrix,
            symmetry,
            shift: ZERO,
        })
    }

    pub fn with_shift(mut self, shift: Scalar) -> Self {
        self.shift = shift;
        self
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }
}

impl LinearOperator for SparseOperator {
    fn dim(&self) -> usize {
        self.matrix.dim()
    }
    fn symmetry(&self) -> SymmetryClass {
        self.symmetry
    }
    fn apply(&self, x: &[Scalar], y: &mut [Scalar]) {
        self.matrix.apply_into(x, y)
    }
    fn shift(&self) -> Scalar {
        self.shift
    }
}

const PROBE_SEED: u64 = 0x5EED_5EED;
const PROBE_PAIRS: usize = 2;
const PROBE_TOL: f64 = 1e-10;

/// Randomized check that `op` has the structure `class` claims.
///
/// Uses two fixed-seed vector pairs `y, z` and compares the bilinear (or
/// sesquilinear) forms `y∘(Az)` and `z∘(Ay)` to within
/// `1e-10·‖A‖est·‖y‖‖z‖`. The shift is not part of the probe.
pub fn probe_symmetry(op: &dyn LinearOperator, class: SymmetryClass) -> Result<()> {
    let n = op.dim();
    if n == 0 {
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let real = class == SymmetryClass::SkewSymmetric;
    let draw = |rng: &mut ChaCha8Rng| -> Vec<Scalar> {
        (0..n)
            .map(|_| {
                let re = rng.random_range(-1.0..1.0);
                let im = if real {
                    0.0
                } else {
                    rng.random_range(-1.0..1.0)
                };
                Scalar::new(re, im)
            })
            .collect()
    };
    let mut ay = vec![ZERO; n];
    let mut az = vec![ZERO; n];
    for _ in 0..PROBE_PAIRS {
        let y = draw(&mut rng);
        let z = draw(&mut rng);
        op.apply(&y, &mut ay);
        op.apply(&z, &mut az);
        let (ny, nz) = (norm(&y), norm(&z));
        let anorm = (norm(&ay) / ny).max(norm(&az) / nz);
        let tol = PROBE_TOL * anorm * ny * nz;
        let gap = match class {
            SymmetryClass::ComplexSymmetric => (dot_t(&y, &az) - dot_t(&z, &ay)).norm(),
            SymmetryClass::SkewSymmetric => {
                if ay.iter().chain(az.iter()).any(|v| v.im != 0.0) {
                    return Err(Error::NotStructured(class));
                }
                (dot_t(&y, &az) + dot_t(&z, &ay)).norm()
            }
            SymmetryClass::Hermitian => (dot_h(&y, &az) - dot_h(&z, &ay).conj()).norm(),
            SymmetryClass::SkewHermitian => (dot_h(&y, &az) + dot_h(&z, &ay).conj()).norm(),
        };
        if !(gap <= tol) {
            return Err(Error::NotStructured(class));
        }
    }
    Ok(())
}
