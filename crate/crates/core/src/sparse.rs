//! Square sparse matrices in compressed-row form.

use crate::linalg::{Scalar, Vector, ZERO};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Scalar>,
}

impl SparseMatrix {
    /// Builds an `n × n` matrix from `(row, col, value)` triplets.
    ///
    /// Duplicates are summed in input order. Explicit zeros are kept.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, Scalar)]) -> Result<Self> {
        let mut counts = vec![0usize; n + 1];
        for &(row, col, _) in triplets {
            if row >= n || col >= n {
                return Err(Error::IndexOutOfRange { row, col, n });
            }
            counts[row + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut cols = vec![0usize; triplets.len()];
        let mut vals = vec![ZERO; triplets.len()];
        for &(row, col, v) in triplets {
            let at = next[row];
            cols[at] = col;
            vals[at] = v;
            next[row] += 1;
        }

        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_ptr.push(0);
        for i in 0..n {
            let mut entries: Vec<(usize, Scalar)> = (counts[i]..counts[i + 1])
                .map(|p| (cols[p], vals[p]))
                .collect();
            // stable sort keeps duplicate summation in input order
            entries.sort_by_key(|e| e.0);
            let start = col_idx.len();
            for (c, v) in entries {
                if col_idx.len() > start && *col_idx.last().unwrap() == c {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(SparseMatrix {
            n,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        let t: Vec<_> = (0..n).map(|i| (i, i, Scalar::new(1.0, 0.0))).collect();
        Self::from_triplets(n, &t).expect("diagonal indices are in range")
    }

    pub fn from_diagonal(d: &[Scalar]) -> Self {
        let t: Vec<_> = d.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        Self::from_triplets(d.len(), &t).expect("diagonal indices are in range")
    }

    /// Row-major dense input; zeros are dropped.
    pub fn from_dense(rows: &[Vec<Scalar>]) -> Result<Self> {
        let n = rows.len();
        let mut t = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v != ZERO {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, &t)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Scalar)> + '_ {
        (0..self.n).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1])
                .map(move |p| (i, self.col_idx[p], self.values[p]))
        })
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        if row >= self.n {
            return ZERO;
        }
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.col_idx[range.clone()].binary_search(&col) {
            Ok(p) => self.values[range.start + p],
            Err(_) => ZERO,
        }
    }

    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut d = vec![vec![ZERO; self.n]; self.n];
        for (i, j, v) in self.triplets() {
            d[i][j] = v;
        }
        d
    }

    pub fn scaled(&self, alpha: Scalar) -> SparseMatrix {
        SparseMatrix {
            values: self.values.iter().map(|v| alpha * v).collect(),
            ..self.clone()
        }
    }

    /// Largest absolute row sum, `‖A‖∞`.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                self.values[self.row_ptr[i]..self.row_ptr[i + 1]]
                    .iter()
                    .map(|v| v.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        crate::linalg::norm(&self.values)
    }

    pub(crate) fn apply_into(&self, x: &[Scalar], y: &mut [Scalar]) {
        for i in 0..self.n {
            let mut acc = ZERO;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[p] * x[self.col_idx[p]];
            }
            y[i] = acc;
        }
    }

    /// `y = M x`.
    pub fn apply(&self, x: &[Scalar]) -> Result<Vector> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut y = Vector::zeros(self.n);
        self.apply_into(x, &mut y);
        Ok(y)
    }
}

/// Free-function form of [`SparseMatrix::apply`].
pub fn sparse_apply(m: &SparseMatrix, x: &[Scalar]) -> Result<Vector> {
    m.apply(x)
}
