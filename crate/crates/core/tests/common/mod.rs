#![allow(dead_code)]

use symkrylov::linalg::norm;
use symkrylov::oracle::{tsvd_solve, DenseMatrix, GeneratedProblem};
use symkrylov::{
    solve_with_monitor, LanczosColumn, Scalar, SolveReport, SolverConfig, SparseMatrix,
    SparseOperator, SymmetryClass,
};

pub fn c(re: f64, im: f64) -> Scalar {
    Scalar::new(re, im)
}

pub fn diff_norm(x: &[Scalar], y: &[Scalar]) -> f64 {
    let d: Vec<Scalar> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    norm(&d)
}

pub fn rel_err(x: &[Scalar], reference: &[Scalar]) -> f64 {
    let r = norm(reference);
    if r == 0.0 {
        norm(x)
    } else {
        diff_norm(x, reference) / r
    }
}

pub fn residual(a: &SparseMatrix, x: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let ax = a.apply(x).unwrap();
    b.iter().zip(ax.iter()).map(|(bi, ai)| bi - ai).collect()
}

/// `T̲ₖ` assembled from the columns seen so far, `(k+1) × k`.
pub fn tridiagonal_from_columns(cols: &[LanczosColumn]) -> DenseMatrix {
    let k = cols.len();
    let mut t = DenseMatrix::zeros(k + 1, k);
    for (j, col) in cols.iter().enumerate() {
        if j > 0 {
            t.set(j - 1, j, c(col.beta, 0.0));
        }
        t.set(j, j, col.alpha);
        t.set(j + 1, j, col.sub());
    }
    t
}

pub fn square_part(t: &DenseMatrix) -> DenseMatrix {
    let k = t.cols();
    DenseMatrix::from_fn(k, k, |i, j| t.get(i, j))
}

/// Outcome of one solver run measured against the dense oracle.
#[derive(Debug, Clone)]
pub struct Measured {
    pub report: SolveReport,
    pub relerr: f64,
    pub kappa: f64,
    /// Largest `|φₖ − ‖b − Axₖ‖| / (‖A‖‖xₖ‖ + ‖b‖)` over iterations with
    /// `φₖ ≥ 1e-10 β₁`.
    pub residual_gap: f64,
    pub anorm_true: f64,
}

pub const TSVD_CUT: f64 = 100.0;

pub fn measure(p: &GeneratedProblem, config: &SolverConfig) -> Measured {
    let op = SparseOperator::new(p.a.clone(), p.variant).unwrap();
    let dense = p.dense();
    let anorm_true = dense.norm2();
    let bnorm = p.b.norm();
    let mut gap: f64 = 0.0;
    let report = solve_with_monitor(&op, &p.b, config, |info| {
        if info.phi >= 1e-10 * bnorm {
            let r = norm(&residual(&p.a, info.x, &p.b));
            let d = (info.phi - r).abs() / (anorm_true * norm(info.x) + bnorm);
            gap = gap.max(d);
        }
    })
    .unwrap();
    let xt = tsvd_solve(&dense, &p.b, TSVD_CUT);
    Measured {
        relerr: rel_err(&report.x, &xt),
        kappa: dense.cond_on_range(TSVD_CUT),
        residual_gap: gap,
        anorm_true,
        report,
    }
}

pub fn default_config(p: &GeneratedProblem) -> SolverConfig {
    SolverConfig::for_dim(p.a.dim(), p.variant)
}

pub fn cs(a: SparseMatrix) -> SparseOperator {
    SparseOperator::new(a, SymmetryClass::ComplexSymmetric).unwrap()
}
