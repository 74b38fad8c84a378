use nalgebra::DMatrix;

use crate::linalg::{Scalar, Vector, EPS, ONE, ZERO};
use crate::sparse::SparseMatrix;

/// Dense `m × n` complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix(pub DMatrix<Scalar>);

impl DenseMatrix {
    pub fn zeros(m: usize, n: usize) -> Self {
        DenseMatrix(DMatrix::from_element(m, n, ZERO))
    }

    pub fn identity(n: usize) -> Self {
        DenseMatrix(DMatrix::identity(n, n))
    }

    pub fn from_fn(m: usize, n: usize, f: impl FnMut(usize, usize) -> Scalar) -> Self {
        DenseMatrix(DMatrix::from_fn(m, n, f))
    }

    pub fn from_sparse(a: &SparseMatrix) -> Self {
        let mut d = Self::zeros(a.dim(), a.dim());
        for (i, j, v) in a.triplets() {
            d.0[(i, j)] += v;
        }
        d
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        assert_eq!(self.rows(), self.cols(), "sparse storage is square");
        let mut t = Vec::new();
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let v = self.0[(i, j)];
                if v != ZERO {
                    t.push((i, j, v));
                }
            }
        }
        SparseMatrix::from_triplets(self.rows(), &t).expect("indices are in range")
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.0[(i, j)] = v;
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vector {
        let xv = nalgebra::DVector::from_column_slice(x);
        (&self.0 * xv).as_slice().to_vec().into()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        DenseMatrix(&self.0 * &other.0)
    }

    pub fn adjoint(&self) -> DenseMatrix {
        DenseMatrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix(self.0.transpose())
    }

    pub fn scaled(&self, alpha: Scalar) -> DenseMatrix {
        DenseMatrix(self.0.map(|v| alpha * v))
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        DenseMatrix(&self.0 - &other.0)
    }

    pub fn norm_fro(&self) -> f64 {
        self.0.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.0.clone().singular_values().iter().cloned().collect();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        s
    }

    pub fn norm2(&self) -> f64 {
        self.singular_values().first().cloned().unwrap_or(0.0)
    }

    /// Number of singular values above `t·σ₁·ε`.
    pub fn rank(&self, t: f64) -> usize {
        let s = self.singular_values();
        let cut = t * s.first().cloned().unwrap_or(0.0) * EPS;
        s.iter().filter(|&&v| v > cut).count()
    }

    /// `σ₁/σᵣ` over the singular values above `t·σ₁·ε`.
    pub fn cond_on_range(&self, t: f64) -> f64 {
        let s = self.singular_values();
        let r = self.rank(t);
        if r == 0 {
            return 1.0;
        }
        s[0] / s[r - 1]
    }

    /// Eigenvalues of a square matrix via the complex Schur form.
    pub fn eigenvalues(&self) -> Vec<Scalar> {
        self.0
            .clone()
            .schur()
            .eigenvalues()
            .map(|e| e.iter().cloned().collect())
            .unwrap_or_default()
    }
}

/// Truncated-SVD solution `Σ_{σᵢ > t‖A‖ε} uᵢ*b / σᵢ · vᵢ`.
pub fn tsvd_solve(a: &DenseMatrix, b: &[Scalar], t: f64) -> Vector {
    let svd = a.0.clone().svd(true, true);
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = t * smax * EPS;
    let bv = nalgebra::DVector::from_column_slice(b);
    let mut x = nalgebra::DVector::from_element(a.cols(), ZERO);
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > cut {
            let coef = u.column(i).dotc(&bv) / s;
            // row i of Vᴴ is vᵢᴴ
            for j in 0..a.cols() {
                x[j] += coef * v_t[(i, j)].conj();
            }
        }
    }
    x.as_slice().to_vec().into()
}

/// Householder QR with a full unitary factor: `A = Q R`, `Q` is `m × m`.
pub fn householder_qr(a: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut r = a.0.clone();
    let mut q = DMatrix::<Scalar>::identity(m, m);
    for j in 0..n.min(m.saturating_sub(1)) {
        let x = r.view((j, j), (m - j, 1)).clone_owned();
        let alpha = x.norm();
        if alpha == 0.0 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 {
            ONE
        } else {
            x0 / x0.norm()
        };
        let mut v = x.clone();
        v[0] += phase * alpha;
        let vnorm = v.norm();
        if vnorm == 0.0 {
            continue;
        }
        v /= Scalar::new(vnorm, 0.0);
        // R ← (I − 2vv*) R on rows j.., Q ← Q (I − 2vv*)
        let mut block = r.view_mut((j, 0), (m - j, n));
        let proj = v.adjoint() * &block;
        block -= &v * proj * Scalar::new(2.0, 0.0);
        let mut qb = q.view_mut((0, j), (m, m - j));
        let proj = &qb * &v;
        qb -= proj * v.adjoint() * Scalar::new(2.0, 0.0);
    }
    for j in 0..n {
        for i in (j + 1)..m {
            r[(i, j)] = ZERO;
        }
    }
    (DenseMatrix(q), DenseMatrix(r))
}

/// QLP decomposition by two QR factorizations: returns unitary `Q`, `P` and
/// lower triangular `L` with `Q T P = [L; 0]` (`Q` is `m × m`, `L` is
/// `n × n`, `m ≥ n`).
pub fn dense_qlp(t: &DenseMatrix) -> (DenseMatrix, DenseMatrix, DenseMatrix) {
    let (m, n) = (t.rows(), t.cols());
    assert!(m >= n, "dense_qlp expects a tall or square matrix");
    let (q1, r1) = householder_qr(t);
    let r_top = DenseMatrix(r1.0.view((0, 0), (n, n)).clone_owned());
    // Rᴴ = Q₂ R₂  ⇒  R = R₂ᴴ Q₂ᴴ  ⇒  R Q₂ = R₂ᴴ
    let (q2, r2) = householder_qr(&r_top.adjoint());
    let l = r2.adjoint();
    (q1.adjoint(), l, q2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> Scalar {
        Scalar::new(v, 0.0)
    }

    #[test]
    fn tsvd_examples() {
        let a = DenseMatrix::from_fn(3, 3, |i, j| if i == j { r([2., 1., 0.][i]) } else { ZERO });
        let x = tsvd_solve(&a, &[r(2.), r(1.), r(1.)], 1.0);
        for (xi, ei) in x.iter().zip([1., 1., 0.]) {
            assert!((xi - r(ei)).norm() < 1e-14);
        }

        let i = Scalar::new(0., 1.);
        let a = DenseMatrix::from_fn(2, 2, |p, q| if p == 0 && q == 0 { i } else { ZERO });
        let x = tsvd_solve(&a, &[i, i], 1.0);
        assert!((x[0] - ONE).norm() < 1e-14 && x[1].norm() < 1e-14);
    }

    #[test]
    fn qlp_of_nonnegative_diagonal_is_itself() {
        let t = DenseMatrix::from_fn(3, 3, |i, j| if i == j { r([3., 2., 1.][i]) } else { ZERO });
        let (_, l, _) = dense_qlp(&t);
        for i in 0..3 {
            assert!((l.get(i, i).norm() - [3., 2., 1.][i]).abs() < 1e-14);
        }
    }
}
