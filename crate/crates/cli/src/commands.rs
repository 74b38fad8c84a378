use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use symkrylov::linalg::norm;
use symkrylov::oracle::{tsvd_solve, DenseMatrix, Suite};
use symkrylov::{
    jacobi_from_matrix, probe_symmetry, solve, Scalar, SolveReport, SolverConfig, SparseMatrix,
    SparseOperator, StopReason, SymmetryClass,
};
use thiserror::Error;

use crate::mm::{self, MmError};
use crate::record::{write_csv, RunRecord};

/// Singular values below `TSVD_CUT·σ₁·ε` are dropped by the oracle.
pub const TSVD_CUT: f64 = 100.0;
/// Threshold used in the experiment summary line.
pub const SUMMARY_RELERR: f64 = 1e-5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: MmError },
    #[error(transparent)]
    Solver(#[from] symkrylov::Error),
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Output(_) => 1,
            _ => 4,
        }
    }
}

/// Exit status for a finished solve: 0 converged or exact, 2 regularized,
/// 3 out of iterations.
pub fn exit_code(reason: StopReason) -> i32 {
    match reason {
        StopReason::CondExceeded | StopReason::XnormExceeded => 2,
        StopReason::MaxIt => 3,
        StopReason::NotStructured | StopReason::PreconditionerBreakdown => 4,
        _ => 0,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "symkrylov",
    version,
    about = "MINRES-QLP for structured singular systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one system read from Matrix Market files.
    Solve(SolveArgs),
    /// Solve a batch of generated problems and write one CSV row each.
    Experiment(ExperimentArgs),
    /// Report which symmetry classes a matrix passes.
    Classify(ClassifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Cs,
    Ss,
    Sh,
    Hermitian,
}

impl From<VariantArg> for SymmetryClass {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Cs => SymmetryClass::ComplexSymmetric,
            VariantArg::Ss => SymmetryClass::SkewSymmetric,
            VariantArg::Sh => SymmetryClass::SkewHermitian,
            VariantArg::Hermitian => SymmetryClass::Hermitian,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrecondArg {
    None,
    Jacobi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    #[value(name = "cs-h")]
    CsH,
    #[value(name = "cs-m")]
    CsM,
    Ss,
    Sh,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::CsH => Suite::CsImaginary,
            SuiteArg::CsM => Suite::CsSpread,
            SuiteArg::Ss => Suite::SkewSymmetric,
            SuiteArg::Sh => Suite::SkewHermitian,
        }
    }
}

/// Parses `RE` or `RE,IM`.
pub fn parse_shift(s: &str) -> Result<Scalar, String> {
    let mut parts = s.split(',');
    let re = parts.next().unwrap_or("").trim();
    let re: f64 = re.parse().map_err(|_| format!("bad real part {re:?}"))?;
    let im: f64 = match parts.next() {
        Some(t) => t
            .trim()
            .parse()
            .map_err(|_| format!("bad imaginary part {t:?}"))?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err("expected RE or RE,IM".into());
    }
    Ok(Scalar::new(re, im))
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("rhs_source").required(true).args(["rhs", "rhs_random", "rhs_compatible"])))]
pub struct SolveArgs {
    /// Coordinate Matrix Market file.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Right-hand side as an n×1 array file.
    #[arg(long)]
    pub rhs: Option<PathBuf>,
    /// Random Gaussian right-hand side.
    #[arg(long, value_name = "SEED")]
    pub rhs_random: Option<u64>,
    /// `b = (A − σI) y` for a random Gaussian `y`.
    #[arg(long, value_name = "SEED")]
    pub rhs_compatible: Option<u64>,
    /// Required for general files; otherwise taken from the header.
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub maxit: Option<usize>,
    #[arg(long)]
    pub maxxnorm: Option<f64>,
    #[arg(long)]
    pub maxcond: Option<f64>,
    #[arg(long)]
    pub trancond: Option<f64>,
    #[arg(long, value_name = "RE[,IM]", value_parser = parse_shift, allow_hyphen_values = true)]
    pub shift: Option<Scalar>,
    #[arg(long, value_enum, default_value = "none")]
    pub precond: PrecondArg,
    /// Compare against the truncated-SVD solution.
    #[arg(long)]
    pub oracle: bool,
    /// Write a one-row CSV record here.
    #[arg(long, value_name = "CSVPATH")]
    pub out: Option<PathBuf>,
    /// Write the solution as an array file.
    #[arg(long, value_name = "PATH")]
    pub solution: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, value_enum)]
    pub suite: SuiteArg,
    /// Number of problems; the first half (rounded up) is compatible.
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    /// Rank of the complex symmetric suites, default `n − 3`.
    #[arg(long)]
    pub rank: Option<usize>,
    /// Problem `i` uses seed `SEED + i`.
    #[arg(long, env = "SYMKRYLOV_SEED", default_value_t = 0)]
    pub seed: u64,
    /// CSV destination; stdout when absent.
    #[arg(long, value_name = "CSVPATH")]
    pub out: Option<PathBuf>,
    /// Leave the wall time column empty so output is byte-reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub matrix: PathBuf,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

fn out_err(e: impl std::fmt::Display) -> CliError {
    CliError::Output(e.to_string())
}

fn gaussian_vector(n: usize, seed: u64, real: bool) -> Vec<Scalar> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = if real {
                0.0
            } else {
                rng.sample(StandardNormal)
            };
            Scalar::new(re, im)
        })
        .collect()
}

fn shifted_dense(a: &SparseMatrix, shift: Scalar) -> DenseMatrix {
    let mut d = DenseMatrix::from_sparse(a);
    for i in 0..a.dim() {
        d.set(i, i, d.get(i, i) - shift);
    }
    d
}

/// `‖x − x†‖/‖x†‖`, or `‖x‖` when `x† = 0`.
pub fn relative_error(a: &DenseMatrix, b: &[Scalar], x: &[Scalar]) -> f64 {
    let xt = tsvd_solve(a, b, TSVD_CUT);
    let diff: Vec<Scalar> = x.iter().zip(xt.iter()).map(|(u, v)| u - v).collect();
    let scale = norm(&xt);
    if scale > 0.0 {
        norm(&diff) / scale
    } else {
        norm(&diff)
    }
}

pub struct SolveOutcome {
    pub report: SolveReport,
    pub record: RunRecord,
    pub exit_code: i32,
}

/// Runs `solve`, printing the report to `out`.
pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<SolveOutcome, CliError> {
    let text = read(&args.matrix)?;
    let file = mm::parse_matrix_file(&text).map_err(|source| CliError::Parse {
        path: args.matrix.clone(),
        source,
    })?;
    let variant: SymmetryClass = match (args.variant, file.class()) {
        (Some(v), _) => v.into(),
        (None, Some(c)) => c,
        (None, None) => {
            return Err(CliError::Usage(format!(
                "{} is a {} file; pass --variant",
                args.matrix.display(),
                file.qualifier.name()
            )))
        }
    };
    let n = file.matrix.dim();
    let shift = args.shift.unwrap_or_default();
    let op = SparseOperator::new(file.matrix, variant)?;
    let real = variant == SymmetryClass::SkewSymmetric;

    let b = if let Some(path) = &args.rhs {
        mm::parse_vector(&read(path)?).map_err(|source| CliError::Parse {
            path: path.clone(),
            source,
        })?
    } else if let Some(seed) = args.rhs_random {
        gaussian_vector(n, seed, real)
    } else {
        let y = gaussian_vector(n, args.rhs_compatible.expect("rhs group is required"), real);
        shifted_dense(op.matrix(), shift).mul_vec(&y).into_inner()
    };

    let mut config = SolverConfig::for_dim(n, variant);
    config.shift = shift;
    if let Some(v) = args.tol {
        config.tol = v;
    }
    if let Some(v) = args.maxit {
        config.maxit = v;
    }
    if let Some(v) = args.maxxnorm {
        config.maxxnorm = v;
    }
    if let Some(v) = args.maxcond {
        config.maxcond = v;
    }
    if let Some(v) = args.trancond {
        config.trancond = v;
    }
    if args.precond == PrecondArg::Jacobi {
        config.preconditioner = Some(jacobi_from_matrix(op.matrix()));
    }

    let start = Instant::now();
    let report = solve(&op, &b, &config)?;
    let elapsed = start.elapsed().as_secs_f64();

    let mut record = RunRecord::from_report(0, n, variant.short_name(), &report);
    record.wall_time_s = Some(elapsed);
    if args.oracle {
        record.relerr = Some(relative_error(
            &shifted_dense(op.matrix(), shift),
            &b,
            &report.x,
        ));
    }

    let w = |out: &mut dyn Write, k: &str, v: String| writeln!(out, "{k:<20}{v}").map_err(out_err);
    w(out, "variant", variant.short_name().into())?;
    w(out, "n", n.to_string())?;
    w(out, "stop_reason", report.reason.name().into())?;
    w(out, "iterations", report.iterations.to_string())?;
    w(
        out,
        "transfer_iteration",
        report
            .transfer_iteration
            .map_or("-".into(), |k| k.to_string()),
    )?;
    w(out, "phi", format!("{:e}", report.phi))?;
    w(out, "psi", format!("{:e}", report.psi))?;
    w(out, "chi", format!("{:e}", report.chi))?;
    w(out, "anorm", format!("{:e}", report.anorm))?;
    w(out, "acond", format!("{:e}", report.acond))?;
    w(out, "omega", format!("{:e}", report.omega))?;
    if let Some(r) = record.relerr {
        w(out, "relerr", format!("{r:e}"))?;
    }
    w(out, "wall_time_s", format!("{elapsed:.6}"))?;

    if let Some(path) = &args.solution {
        write_file(path, &mm::write_vector(report.x.as_slice()))?;
    }
    if let Some(path) = &args.out {
        let mut buf = Vec::new();
        write_csv(&mut buf, std::slice::from_ref(&record)).map_err(out_err)?;
        write_file(
            path,
            std::str::from_utf8(&buf).expect("csv output is utf-8"),
        )?;
    }

    Ok(SolveOutcome {
        exit_code: exit_code(report.reason),
        report,
        record,
    })
}

/// Solves problem `id` of a sweep.
fn run_one(
    suite: Suite,
    n: usize,
    rank: usize,
    seed: u64,
    id: usize,
    compatible: bool,
    timing: bool,
) -> RunRecord {
    let p = suite.generate(n, rank, seed.wrapping_add(id as u64), compatible);
    let op = SparseOperator::new(p.a.clone(), p.variant).expect("generated data has its structure");
    let config = SolverConfig::for_dim(n, p.variant);
    let start = Instant::now();
    let report = solve(&op, &p.b, &config).expect("generated problems are valid input");
    let elapsed = start.elapsed().as_secs_f64();
    let mut rec = RunRecord::from_report(id, n, p.variant.short_name(), &report);
    rec.compatible = Some(compatible);
    rec.relerr = Some(relative_error(&p.dense(), &p.b, &report.x));
    rec.wall_time_s = timing.then_some(elapsed);
    rec
}

/// Generates and solves `count` problems in parallel. Rows come back in
/// problem order.
pub fn run_experiment(
    suite: Suite,
    count: usize,
    n: usize,
    rank: Option<usize>,
    seed: u64,
    timing: bool,
) -> Vec<RunRecord> {
    let rank = rank.unwrap_or(n.saturating_sub(3)).min(n);
    let n_compatible = count.div_ceil(2);
    (0..count)
        .into_par_iter()
        .map(|id| run_one(suite, n, rank, seed, id, id < n_compatible, timing))
        .collect()
}

/// `"passed/total"` counts of rows with `relerr ≤ SUMMARY_RELERR`.
pub fn summary_line(suite: Suite, records: &[RunRecord]) -> String {
    let ok = |r: &RunRecord| r.relerr.is_some_and(|e| e <= SUMMARY_RELERR);
    let count = |compat: bool| {
        let rows: Vec<_> = records
            .iter()
            .filter(|r| r.compatible == Some(compat))
            .collect();
        (rows.iter().filter(|r| ok(r)).count(), rows.len())
    };
    let (c_ok, c_n) = count(true);
    let (l_ok, l_n) = count(false);
    format!(
        "{}: {}/{} runs with relerr <= {:e} (compatible {c_ok}/{c_n}, least squares {l_ok}/{l_n})",
        suite.name(),
        c_ok + l_ok,
        records.len(),
        SUMMARY_RELERR
    )
}

/// CSV rows go to `--out` or `out`; the summary line goes to `summary`.
pub fn cmd_experiment(
    args: &ExperimentArgs,
    out: &mut dyn Write,
    summary: &mut dyn Write,
) -> Result<Vec<RunRecord>, CliError> {
    if args.count > 0 && args.n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let suite: Suite = args.suite.into();
    let records = run_experiment(
        suite,
        args.count,
        args.n,
        args.rank,
        args.seed,
        !args.no_timing,
    );
    match &args.out {
        Some(path) => {
            let mut buf = Vec::new();
            write_csv(&mut buf, &records).map_err(out_err)?;
            write_file(
                path,
                std::str::from_utf8(&buf).expect("csv output is utf-8"),
            )?;
        }
        None => write_csv(&mut *out, &records).map_err(out_err)?,
    }
    writeln!(summary, "{}", summary_line(suite, &records)).map_err(out_err)?;
    Ok(records)
}

/// Prints `class: yes|no` for each solver class.
pub fn cmd_classify(
    args: &ClassifyArgs,
    out: &mut dyn Write,
) -> Result<Vec<SymmetryClass>, CliError> {
    let text = read(&args.matrix)?;
    let file = mm::parse_matrix_file(&text).map_err(|source| CliError::Parse {
        path: args.matrix.clone(),
        source,
    })?;
    writeln!(out, "{:<12}{}", "qualifier", file.qualifier.name()).map_err(out_err)?;
    let mut passed = Vec::new();
    for class in [
        SymmetryClass::ComplexSymmetric,
        SymmetryClass::SkewSymmetric,
        SymmetryClass::SkewHermitian,
        SymmetryClass::Hermitian,
    ] {
        let ok = SparseOperator::new(file.matrix.clone(), class)
            .is_ok_and(|op| probe_symmetry(&op, class).is_ok());
        if ok {
            passed.push(class);
        }
        writeln!(
            out,
            "{:<12}{}",
            class.short_name(),
            if ok { "yes" } else { "no" }
        )
        .map_err(out_err)?;
    }
    Ok(passed)
}
