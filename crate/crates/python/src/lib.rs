//! Python bindings: sparse matrices, the solver, reflections and the
//! dense oracle.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use symkrylov_core as core;
use symkrylov_core::oracle::{DenseMatrix, Suite};
use symkrylov_core::{SolverConfig, SparseOperator, SymmetryClass};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn class_from(name: &str) -> PyResult<SymmetryClass> {
    SymmetryClass::from_short_name(name).ok_or_else(|| {
        err(format!(
            "unknown variant {name:?}; use cs, ss, sh or hermitian"
        ))
    })
}

/// Square sparse matrix in compressed-row form.
#[pyclass(name = "SparseMatrix", module = "symkrylov", frozen)]
#[derive(Clone)]
struct PySparseMatrix {
    inner: core::SparseMatrix,
}

#[pymethods]
impl PySparseMatrix {
    /// `SparseMatrix(n, rows, cols, values)`; duplicates are summed.
    #[new]
    fn new(n: usize, rows: Vec<usize>, cols: Vec<usize>, values: Vec<Complex64>) -> PyResult<Self> {
        if rows.len() != cols.len() || rows.len() != values.len() {
            return Err(err("rows, cols and values must have equal length"));
        }
        let t: Vec<_> = rows
            .into_iter()
            .zip(cols)
            .zip(values)
            .map(|((i, j), v)| (i, j, v))
            .collect();
        Ok(PySparseMatrix {
            inner: core::SparseMatrix::from_triplets(n, &t).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_dense(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(PySparseMatrix {
            inner: core::SparseMatrix::from_dense(&rows).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn nnz(&self) -> usize {
        self.inner.nnz()
    }

    fn get(&self, row: usize, col: usize) -> Complex64 {
        self.inner.get(row, col)
    }

    fn apply(&self, x: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        Ok(self.inner.apply(&x).map_err(err)?.into_inner())
    }

    fn to_dense(&self) -> Vec<Vec<Complex64>> {
        self.inner.to_dense()
    }

    fn triplets(&self) -> Vec<(usize, usize, Complex64)> {
        self.inner.triplets().collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "SparseMatrix(dim={}, nnz={})",
            self.inner.dim(),
            self.inner.nnz()
        )
    }
}

/// Result of `solve`.
#[pyclass(name = "SolveReport", module = "symkrylov", frozen, get_all)]
struct PySolveReport {
    x: Vec<Complex64>,
    reason: String,
    iterations: usize,
    transfer_iteration: Option<usize>,
    phi: f64,
    psi: f64,
    chi: f64,
    anorm: f64,
    acond: f64,
    omega: f64,
}

#[pymethods]
impl PySolveReport {
    /// True for the two backward-error exits.
    #[getter]
    fn converged(&self) -> bool {
        self.reason.starts_with("Converged")
    }

    fn __repr__(&self) -> String {
        format!(
            "SolveReport(reason={}, iterations={}, phi={:e}, chi={:e})",
            self.reason, self.iterations, self.phi, self.chi
        )
    }
}

/// Solves `(A − shift·I) x ≈ b` and returns the minimum-length solution.
#[pyfunction]
#[pyo3(signature = (a, b, variant = "cs", *, tol = None, maxit = None, maxxnorm = None,
    maxcond = None, trancond = None, shift = Complex64::new(0.0, 0.0), precond = "none",
    check_symmetry = true))]
#[allow(clippy::too_many_arguments)]
fn solve(
    a: &PySparseMatrix,
    b: Vec<Complex64>,
    variant: &str,
    tol: Option<f64>,
    maxit: Option<usize>,
    maxxnorm: Option<f64>,
    maxcond: Option<f64>,
    trancond: Option<f64>,
    shift: Complex64,
    precond: &str,
    check_symmetry: bool,
) -> PyResult<PySolveReport> {
    let class = class_from(variant)?;
    let op = SparseOperator::new(a.inner.clone(), class).map_err(err)?;
    let mut config = SolverConfig::for_dim(a.inner.dim(), class);
    config.tol = tol.unwrap_or(config.tol);
    config.maxit = maxit.unwrap_or(config.maxit);
    config.maxxnorm = maxxnorm.unwrap_or(config.maxxnorm);
    config.maxcond = maxcond.unwrap_or(config.maxcond);
    config.trancond = trancond.unwrap_or(config.trancond);
    config.shift = shift;
    config.check_symmetry = check_symmetry;
    config.preconditioner = match precond {
        "none" => None,
        "jacobi" => Some(core::jacobi_from_matrix(&a.inner)),
        other => return Err(err(format!("unknown preconditioner {other:?}"))),
    };
    let r = core::solve(&op, &b, &config).map_err(err)?;
    Ok(PySolveReport {
        x: r.x.into_inner(),
        reason: r.reason.name().to_string(),
        iterations: r.iterations,
        transfer_iteration: r.transfer_iteration,
        phi: r.phi,
        psi: r.psi,
        chi: r.chi,
        anorm: r.anorm,
        acond: r.acond,
        omega: r.omega,
    })
}

/// Returns `(c, s, r)` with `[c s; s̄ −c] [a; b] = [r; 0]`.
#[pyfunction]
fn sym_ortho(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    let q = core::sym_ortho(a, b);
    (q.c, q.s, q.r)
}

/// True when `a` passes the randomized probe for `variant`.
#[pyfunction]
fn probe_symmetry(a: &PySparseMatrix, variant: &str) -> PyResult<bool> {
    let class = class_from(variant)?;
    Ok(SparseOperator::new(a.inner.clone(), class)
        .is_ok_and(|op| core::probe_symmetry(&op, class).is_ok()))
}

/// Truncated-SVD solution dropping singular values below `t·σ₁·ε`.
#[pyfunction]
#[pyo3(signature = (a, b, t = 100.0))]
fn tsvd_solve(a: &PySparseMatrix, b: Vec<Complex64>, t: f64) -> PyResult<Vec<Complex64>> {
    if b.len() != a.inner.dim() {
        return Err(err(format!(
            "b has length {}, expected {}",
            b.len(),
            a.inner.dim()
        )));
    }
    Ok(core::oracle::tsvd_solve(&DenseMatrix::from_sparse(&a.inner), &b, t).into_inner())
}

/// Test problem from one of the suites `cs-h`, `cs-m`, `ss`, `sh`.
/// Returns `(matrix, b, variant)`.
#[pyfunction]
#[pyo3(signature = (suite, n, seed, compatible = true, rank = None))]
fn generate(
    suite: &str,
    n: usize,
    seed: u64,
    compatible: bool,
    rank: Option<usize>,
) -> PyResult<(PySparseMatrix, Vec<Complex64>, String)> {
    let s = Suite::from_name(suite).ok_or_else(|| err(format!("unknown suite {suite:?}")))?;
    let p = s.generate(
        n,
        rank.unwrap_or(n.saturating_sub(3)).min(n),
        seed,
        compatible,
    );
    Ok((
        PySparseMatrix { inner: p.a },
        p.b.into_inner(),
        p.variant.short_name().to_string(),
    ))
}

#[pymodule]
fn symkrylov(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySparseMatrix>()?;
    m.add_class::<PySolveReport>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(sym_ortho, m)?)?;
    m.add_function(wrap_pyfunction!(probe_symmetry, m)?)?;
    m.add_function(wrap_pyfunction!(tsvd_solve, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add("EPS", core::EPS)?;
    Ok(())
}
