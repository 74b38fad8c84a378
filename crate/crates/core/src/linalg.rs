//! Complex scalars, dense vectors and the handful of BLAS-1 kernels the
//! solvers need.

use std::ops::{Deref, DerefMut, Index, IndexMut};

use crate::{Error, Result};

pub type Scalar = num_complex::Complex64;

/// Unit roundoff of IEEE double precision, `2⁻⁵²`.
pub const EPS: f64 = f64::EPSILON;

pub(crate) const ZERO: Scalar = Scalar::new(0.0, 0.0);
pub(crate) const ONE: Scalar = Scalar::new(1.0, 0.0);
pub(crate) const I: Scalar = Scalar::new(0.0, 1.0);

/// Dense complex vector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Vector(Vec<Scalar>);

impl Vector {
    pub fn zeros(n: usize) -> Self {
        Vector(vec![ZERO; n])
    }

    pub fn from_real(values: &[f64]) -> Self {
        Vector(values.iter().map(|&v| Scalar::new(v, 0.0)).collect())
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k] = ONE;
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Scalar> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn conj(&self) -> Vector {
        Vector(self.0.iter().map(|z| z.conj()).collect())
    }

    pub fn scaled(&self, alpha: Scalar) -> Vector {
        Vector(self.0.iter().map(|z| alpha * z).collect())
    }
}

impl From<Vec<Scalar>> for Vector {
    fn from(v: Vec<Scalar>) -> Self {
        Vector(v)
    }
}

impl From<&[Scalar]> for Vector {
    fn from(v: &[Scalar]) -> Self {
        Vector(v.to_vec())
    }
}

impl Deref for Vector {
    type Target = [Scalar];
    fn deref(&self) -> &[Scalar] {
        &self.0
    }
}

impl DerefMut for Vector {
    fn deref_mut(&mut self) -> &mut [Scalar] {
        &mut self.0
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut Scalar {
        &mut self.0[i]
    }
}

fn check_len(x: &[Scalar], y: &[Scalar]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(())
}

/// `αx + y`.
pub fn axpy(alpha: Scalar, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
    check_len(x, y)?;
    Ok(Vector(
        x.iter().zip(y).map(|(xi, yi)| alpha * xi + yi).collect(),
    ))
}

/// Unconjugated bilinear form `xᵀy`. Not an inner product: `[1, i]ᵀ[1, i] = 0`.
pub fn inner_t(x: &[Scalar], y: &[Scalar]) -> Result<Scalar> {
    check_len(x, y)?;
    Ok(dot_t(x, y))
}

/// Hermitian inner product `x*y`.
pub fn inner_h(x: &[Scalar], y: &[Scalar]) -> Result<Scalar> {
    check_len(x, y)?;
    Ok(dot_h(x, y))
}

pub(crate) fn dot_t(x: &[Scalar], y: &[Scalar]) -> Scalar {
    x.iter().zip(y).fold(ZERO, |acc, (a, b)| acc + a * b)
}

pub(crate) fn dot_h(x: &[Scalar], y: &[Scalar]) -> Scalar {
    x.iter().zip(y).fold(ZERO, |acc, (a, b)| acc + a.conj() * b)
}

/// Euclidean norm, scaled so that entries near the overflow threshold are safe.
pub fn norm(x: &[Scalar]) -> f64 {
    let scale = x
        .iter()
        .fold(0.0_f64, |m, z| m.max(z.re.abs()).max(z.im.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let ssq: f64 = x
        .iter()
        .map(|z| {
            let (a, b) = (z.re / scale, z.im / scale);
            a * a + b * b
        })
        .sum();
    scale * ssq.sqrt()
}

/// `y += αx` in place.
pub(crate) fn axpy_mut(alpha: Scalar, x: &[Scalar], y: &mut [Scalar]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Norm of a short list of scalars, e.g. `‖[β α β']‖`.
pub(crate) fn hypot_n(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |acc, v| acc.hypot(*v))
}
