//! Preconditioners `M` for the preconditioned processes. Only the action
//! `z ↦ M⁻¹z` is ever used; no factor of `M` is formed.

use std::fmt;
use std::sync::Arc;

use crate::linalg::{Scalar, Vector};
use crate::sparse::SparseMatrix;
use crate::{Error, Result};

type SolveFn = dyn Fn(&[Scalar], &mut [Scalar]) + Send + Sync;

#[derive(Clone)]
enum Kind {
    Identity,
    Diagonal(Vec<Scalar>),
    Custom(Arc<SolveFn>),
}

#[derive(Clone)]
pub struct Preconditioner {
    n: usize,
    kind: Kind,
}

impl fmt::Debug for Preconditioner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            Kind::Identity => "Identity".to_string(),
            Kind::Diagonal(d) => format!("Diagonal({:?})", d),
            Kind::Custom(_) => "Custom".to_string(),
        };
        f.debug_struct("Preconditioner")
            .field("n", &self.n)
            .field("kind", &kind)
            .finish()
    }
}

impl Preconditioner {
    pub fn identity(n: usize) -> Self {
        Preconditioner {
            n,
            kind: Kind::Identity,
        }
    }

    /// `M = diag(entries)`; every entry must be nonzero.
    pub fn diagonal(entries: Vec<Scalar>) -> Result<Self> {
        if let Some(index) = entries.iter().position(|d| *d == Scalar::new(0.0, 0.0)) {
            return Err(Error::SingularPreconditioner { index });
        }
        Ok(Preconditioner {
            n: entries.len(),
            kind: Kind::Diagonal(entries),
        })
    }

    /// User-supplied `solve(z, q)` writing `q = M⁻¹z`. `M` should be
    /// complex symmetric or Hermitian positive definite to match the solve.
    pub fn custom<F>(n: usize, solve: F) -> Self
    where
        F: Fn(&[Scalar], &mut [Scalar]) + Send + Sync + 'static,
    {
        Preconditioner {
            n,
            kind: Kind::Custom(Arc::new(solve)),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, Kind::Identity)
    }

    /// Entries of a diagonal preconditioner.
    pub fn diagonal_entries(&self) -> Option<&[Scalar]> {
        match &self.kind {
            Kind::Diagonal(d) => Some(d),
            _ => None,
        }
    }

    pub(crate) fn solve_into(&self, z: &[Scalar], q: &mut [Scalar]) {
        match &self.kind {
            Kind::Identity => q.copy_from_slice(z),
            Kind::Diagonal(d) => {
                for ((qi, zi), di) in q.iter_mut().zip(z).zip(d) {
                    *qi = zi / di;
                }
            }
            Kind::Custom(f) => f(z, q),
        }
    }

    /// `q = M⁻¹ z`.
    pub fn m_solve(&self, z: &[Scalar]) -> Result<Vector> {
        if z.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: z.len(),
            });
        }
        let mut q = Vector::zeros(self.n);
        self.solve_into(z, &mut q);
        Ok(q)
    }
}

/// Jacobi preconditioner `diag(max(|a_jj|, 1e-8·max_j |a_jj|))`, or the
/// identity when the diagonal vanishes.
pub fn jacobi_from_matrix(a: &SparseMatrix) -> Preconditioner {
    let mags: Vec<f64> = a.diagonal().iter().map(|d| d.norm()).collect();
    let largest = mags.iter().cloned().fold(0.0, f64::max);
    if largest == 0.0 {
        return Preconditioner::identity(a.dim());
    }
    let floor = 1e-8 * largest;
    let entries = mags
        .into_iter()
        .map(|m| Scalar::new(m.max(floor), 0.0))
        .collect();
    Preconditioner::diagonal(entries).expect("floored entries are positive")
}
