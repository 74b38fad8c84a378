//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symkrylov::linalg::norm;
use symkrylov::oracle::{dense_qlp, GeneratedProblem, Suite};
use symkrylov::{
    solve, solve_with_monitor, sym_ortho, Error, LanczosColumn, Preconditioner, Scalar,
    SolverConfig, SparseMatrix, SparseOperator, StopReason, SymmetryClass, EPS,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn suite(
    s: Suite,
    n: usize,
    rank: usize,
    count: u64,
    base: u64,
    compatible: bool,
) -> Vec<GeneratedProblem> {
    (0..count)
        .map(|i| s.generate(n, rank, base + i, compatible))
        .collect()
}

fn pct(hits: usize, total: usize) -> f64 {
    100.0 * hits as f64 / total.max(1) as f64
}

/// Compatible suite thresholds: at least 90% within 1e-6, every run within 1e-3.
fn judge_compatible(runs: &[Measured]) -> (bool, String) {
    let good = runs.iter().filter(|m| m.relerr <= 1e-6).count();
    let worst = runs.iter().map(|m| m.relerr).fold(0.0, f64::max);
    let kmax = runs.iter().map(|m| m.kappa).fold(0.0, f64::max);
    let pass = pct(good, runs.len()) >= 90.0 && worst <= 1e-3 && kmax <= 1e4;
    (
        pass,
        format!(
            "{}/{} relerr <= 1e-6, worst {:.1e}, max kappa {:.1e}",
            good,
            runs.len(),
            worst,
            kmax
        ),
    )
}

/// Least-squares thresholds: at least 85% with relerr <= 1e-4 kappa and a
/// Converged_ArNorm exit.
fn judge_ls(runs: &[Measured]) -> (bool, String) {
    let accurate = runs.iter().filter(|m| m.relerr <= 1e-4 * m.kappa).count();
    let arnorm = runs
        .iter()
        .filter(|m| m.report.reason == StopReason::ConvergedArNorm)
        .count();
    let both = runs
        .iter()
        .filter(|m| m.relerr <= 1e-4 * m.kappa && m.report.reason == StopReason::ConvergedArNorm)
        .count();
    let mut reasons: Vec<(String, usize)> = Vec::new();
    for m in runs {
        let name = m.report.reason.name().to_string();
        match reasons.iter_mut().find(|(r, _)| *r == name) {
            Some((_, c)) => *c += 1,
            None => reasons.push((name, 1)),
        }
    }
    let reasons: Vec<String> = reasons.iter().map(|(r, c)| format!("{r} x{c}")).collect();
    let worst = runs.iter().map(|m| m.relerr / m.kappa).fold(0.0, f64::max);
    (
        pct(both, runs.len()) >= 85.0,
        format!(
            "{}/{} accurate (worst relerr/kappa {:.1e}), {}/{} Converged_ArNorm [{}]",
            accurate,
            runs.len(),
            worst,
            arnorm,
            runs.len(),
            reasons.join(", ")
        ),
    )
}

fn run_all(problems: &[GeneratedProblem]) -> (Vec<Measured>, Duration) {
    let start = Instant::now();
    let runs = problems
        .iter()
        .map(|p| measure(p, &default_config(p)))
        .collect();
    (runs, start.elapsed())
}

fn criterion_1() -> Outcome {
    let i = c(0.0, 1.0);
    let a = SparseMatrix::from_triplets(2, &[(0, 0, i)]).unwrap();
    let op = cs(a);
    let b = vec![i, i];
    let config = SolverConfig::for_dim(2, SymmetryClass::ComplexSymmetric);
    let start = Instant::now();
    let report = solve(&op, &b, &config).unwrap();
    let elapsed = start.elapsed();
    let err = diff_norm(&report.x, &[c(1.0, 0.0), c(0.0, 0.0)]);
    outcome(
        err <= 1e-12 && elapsed < Duration::from_millis(1),
        format!("error {:.1e}, {:?}, {}", err, elapsed, report.reason),
    )
}

fn criterion_2(gaps: &mut Vec<f64>) -> Outcome {
    let problems = suite(Suite::CsImaginary, 50, 47, 20, 100, true);
    let (runs, elapsed) = run_all(&problems);
    gaps.extend(runs.iter().map(|m| m.residual_gap));
    let (pass, detail) = judge_compatible(&runs);
    outcome(
        pass && elapsed < Duration::from_secs(5),
        format!("{detail}, {elapsed:.2?}"),
    )
}

fn criterion_3(gaps: &mut Vec<f64>) -> Outcome {
    let problems = suite(Suite::CsImaginary, 50, 47, 20, 200, false);
    let (runs, elapsed) = run_all(&problems);
    gaps.extend(runs.iter().map(|m| m.residual_gap));
    let (pass, detail) = judge_ls(&runs);
    outcome(
        pass && elapsed < Duration::from_secs(10),
        format!("{detail}, {elapsed:.2?}"),
    )
}

fn criterion_4(gaps: &mut Vec<f64>) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (s, base) in [(Suite::SkewSymmetric, 300), (Suite::SkewHermitian, 400)] {
        let (compat, _) = run_all(&suite(s, 51, 50, 10, base, true));
        let (ls, _) = run_all(&suite(s, 51, 50, 10, base + 50, false));
        gaps.extend(compat.iter().chain(&ls).map(|m| m.residual_gap));
        let (pc, dc) = judge_compatible(&compat);
        let (pl, dl) = judge_ls(&ls);
        pass &= pc && pl;
        parts.push(format!(
            "{} compatible: {}; {} LS: {}",
            s.name(),
            dc,
            s.name(),
            dl
        ));
    }
    outcome(pass, parts.join(" | "))
}

fn criterion_5(gaps: &[f64]) -> Outcome {
    let worst = gaps.iter().cloned().fold(0.0, f64::max);
    outcome(
        worst <= 1e-8,
        format!("max gap {:.1e} over {} runs", worst, gaps.len()),
    )
}

fn criterion_6() -> Outcome {
    let mut problems = suite(Suite::CsImaginary, 30, 30, 4, 600, true);
    problems.extend(suite(Suite::CsSpread, 30, 30, 3, 610, true));
    problems.extend(suite(Suite::SkewSymmetric, 30, 30, 3, 620, true));
    let mut worst: f64 = 0.0;
    for p in &problems {
        let op = SparseOperator::new(p.a.clone(), p.variant).unwrap();
        let mut qlp = default_config(p);
        qlp.trancond = 1.0;
        let mut minres = default_config(p);
        minres.trancond = 1e300;
        let xq = solve(&op, &p.b, &qlp).unwrap().x;
        let xm = solve(&op, &p.b, &minres).unwrap().x;
        worst = worst.max(rel_err(&xq, &xm));
    }
    outcome(
        worst <= 1e-8,
        format!(
            "max relative difference {:.1e} over {} problems",
            worst,
            problems.len()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut problems = suite(Suite::CsImaginary, 20, 17, 4, 700, false);
    problems.extend(suite(Suite::CsSpread, 20, 17, 3, 710, false));
    problems.extend(suite(Suite::SkewHermitian, 21, 20, 3, 720, false));
    let mut ok = 0;
    let mut notes = Vec::new();
    for p in &problems {
        let op = SparseOperator::new(p.a.clone(), p.variant).unwrap();
        let mut config = default_config(p);
        config.reorthogonalize = true;
        config.maxxnorm = 1e300;
        config.maxcond = 1e300;
        let mut cols: Vec<LanczosColumn> = Vec::new();
        let mut flagged = false;
        let mut anorm = 0.0;
        let report = solve_with_monitor(&op, &p.b, &config, |info| {
            cols.push(info.column);
            flagged = info.mu_zeroed;
            anorm = info.anorm;
        })
        .unwrap();
        let exhausted = cols.last().map_or(false, |c| c.beta_next <= 1e-10 * anorm);
        let ell = cols.len();
        let t = square_part(&tridiagonal_from_columns(&cols));
        let (_, l, _) = dense_qlp(&t);
        let rank = l.rank(10.0 * ell as f64);
        let good = exhausted && rank + 1 == ell && flagged;
        if good {
            ok += 1;
        } else {
            notes.push(format!(
                "seed {}: {} ell {} exhausted {} rank(L) {} flagged {}",
                p.seed, report.reason, ell, exhausted, rank, flagged
            ));
        }
    }
    outcome(
        ok == problems.len(),
        format!(
            "{}/{} rank(L) = ell-1 with gamma4 flagged {}",
            ok,
            problems.len(),
            notes.join("; ")
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut problems = suite(Suite::CsImaginary, 30, 27, 3, 800, true);
    problems.extend(suite(Suite::CsSpread, 30, 27, 3, 810, false));
    problems.extend(suite(Suite::SkewSymmetric, 31, 30, 2, 820, false));
    problems.extend(suite(Suite::SkewHermitian, 31, 30, 2, 830, true));
    let mut violations = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    for p in &problems {
        let op = SparseOperator::new(p.a.clone(), p.variant).unwrap();
        let sigma1 = p.dense().norm2();
        let mut cols: Vec<LanczosColumn> = Vec::new();
        let mut prev_anorm: f64 = 0.0;
        let mut bad = Vec::new();
        solve_with_monitor(&op, &p.b, &default_config(p), |info| {
            cols.push(info.column);
            if info.anorm > sigma1 * (1.0 + 1e-10) {
                bad.push(format!(
                    "k {} anorm {:.3e} > sigma1 {:.3e}",
                    info.k, info.anorm, sigma1
                ));
            }
            if info.anorm < prev_anorm {
                bad.push(format!("k {} anorm decreased", info.k));
            }
            prev_anorm = info.anorm;
            if info.k <= 15 {
                let sv = tridiagonal_from_columns(&cols).singular_values();
                let true_kappa = sv[0] / sv[sv.len() - 1];
                let ratio = info.acond / true_kappa;
                worst_ratio = worst_ratio.max(ratio);
                if ratio > 1.01 {
                    bad.push(format!(
                        "k {} kappa est {:.3e} > {:.3e}",
                        info.k, info.acond, true_kappa
                    ));
                }
            }
        })
        .unwrap();
        if !bad.is_empty() {
            violations.push(format!("seed {}: {}", p.seed, bad.join(", ")));
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "{} problems, max kappa-est/kappa(T) {:.3} {}",
            problems.len(),
            worst_ratio,
            violations.join("; ")
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(900);
    let draw = |rng: &mut ChaCha8Rng| -> Scalar {
        match rng.random_range(0..10) {
            0 => c(0.0, 0.0),
            1 => c(10f64.powf(rng.random_range(-150.0..150.0)), 0.0),
            2 => c(0.0, -(10f64.powf(rng.random_range(-150.0..150.0)))),
            _ => {
                let mag = 10f64.powf(rng.random_range(-150.0..150.0));
                let theta = rng.random_range(0.0..std::f64::consts::TAU);
                Scalar::from_polar(mag, theta)
            }
        }
    };
    let (mut worst_unit, mut worst_zero, mut worst_r) = (0.0f64, 0.0f64, 0.0f64);
    let mut nonfinite = 0;
    for _ in 0..100_000 {
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        let q = sym_ortho(a, b);
        let (r, z) = q.apply(a, b);
        if !(q.c.is_finite()
            && q.s.re.is_finite()
            && q.s.im.is_finite()
            && q.r.re.is_finite()
            && q.r.im.is_finite())
        {
            nonfinite += 1;
            continue;
        }
        worst_unit = worst_unit.max((q.c * q.c + q.s.norm_sqr() - 1.0).abs());
        let scale = a.norm().hypot(b.norm());
        if scale > 0.0 {
            worst_zero = worst_zero.max(z.norm() / scale);
            worst_r = worst_r.max((r - q.r).norm() / scale);
        }
    }
    let tol = 8.0 * EPS;
    outcome(
        nonfinite == 0 && worst_unit <= tol && worst_zero <= tol && worst_r <= tol,
        format!(
            "|c^2+|s|^2-1| {:.1e}, annihilation {:.1e}, |Q[a;b]-r| {:.1e} (limit {:.1e}), non-finite {}",
            worst_unit, worst_zero, worst_r, tol, nonfinite
        ),
    )
}

fn criterion_10() -> Outcome {
    let problems = vec![
        Suite::CsImaginary.generate(30, 30, 1000, true),
        Suite::CsSpread.generate(30, 27, 1001, false),
        Suite::SkewSymmetric.generate(30, 30, 1002, true),
        Suite::SkewHermitian.generate(31, 30, 1003, true),
        Suite::CsImaginary.generate(30, 27, 1004, false),
    ];
    let mut worst: f64 = 0.0;
    let mut detail_iters = 0;
    for p in &problems {
        let op = SparseOperator::new(p.a.clone(), p.variant).unwrap();
        let plain_cfg = default_config(p);
        let mut prec_cfg = default_config(p);
        prec_cfg.preconditioner = Some(Preconditioner::identity(p.a.dim()));
        let mut plain: Vec<Vec<Scalar>> = Vec::new();
        solve_with_monitor(&op, &p.b, &plain_cfg, |info| plain.push(info.x.to_vec())).unwrap();
        let mut prec: Vec<Vec<Scalar>> = Vec::new();
        solve_with_monitor(&op, &p.b, &prec_cfg, |info| prec.push(info.x.to_vec())).unwrap();
        if plain.len() != prec.len() {
            return outcome(
                false,
                format!(
                    "seed {}: {} vs {} iterations",
                    p.seed,
                    plain.len(),
                    prec.len()
                ),
            );
        }
        for (xp, xm) in plain.iter().zip(&prec) {
            let scale = norm(xp).max(f64::MIN_POSITIVE);
            worst = worst.max(diff_norm(xp, xm) / scale);
        }
        detail_iters += plain.len();
    }
    outcome(
        worst <= 4.0 * EPS,
        format!(
            "max per-iteration relative difference {:.1e} over {} iterates",
            worst, detail_iters
        ),
    )
}

fn criterion_11() -> Outcome {
    let mut notes = Vec::new();
    let a = SparseMatrix::from_diagonal(&[c(1.0, 1.0), c(2.0, 0.0), c(0.0, 3.0)]);
    let op = cs(a);
    let config = SolverConfig::for_dim(3, SymmetryClass::ComplexSymmetric);
    let r = solve(&op, &[c(0.0, 0.0); 3], &config).unwrap();
    let zero_ok = r.reason == StopReason::BetaZeroXZero && norm(&r.x) == 0.0;
    notes.push(format!("b=0: {} |x| {:.1e}", r.reason, norm(&r.x)));

    let three = cs(SparseMatrix::from_diagonal(&[c(3.0, 0.0), c(3.0, 0.0)]));
    let phase = c(1.0, 1.0);
    let b = vec![phase, phase * 2.0];
    let r = solve(
        &three,
        &b,
        &SolverConfig::for_dim(2, SymmetryClass::ComplexSymmetric),
    )
    .unwrap();
    let expected: Vec<Scalar> = b.iter().map(|v| v / 3.0).collect();
    let err = diff_norm(&r.x, &expected);
    let beta2_ok = r.reason == StopReason::Beta2ZeroOneStep && err <= 1e-14;
    notes.push(format!("beta2=0: {} err {:.1e}", r.reason, err));

    let nonsym =
        SparseMatrix::from_triplets(2, &[(0, 1, c(1.0, 0.0)), (1, 0, c(2.0, 0.0))]).unwrap();
    let res = solve(
        &cs(nonsym),
        &[c(1.0, 0.0), c(1.0, 0.0)],
        &SolverConfig::for_dim(2, SymmetryClass::ComplexSymmetric),
    );
    let ns_ok = matches!(res, Err(Error::NotStructured(_)));
    notes.push(format!(
        "non-symmetric: {}",
        match res {
            Err(e) => e.to_string(),
            Ok(r) => format!("unexpected {}", r.reason),
        }
    ));
    outcome(zero_ok && beta2_ok && ns_ok, notes.join(", "))
}

fn main() {
    let mut gaps = Vec::new();
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    results.push((1, "pseudoinverse exactness", criterion_1()));
    results.push((2, "compatible cs-h suite", criterion_2(&mut gaps)));
    results.push((3, "least-squares cs-h suite", criterion_3(&mut gaps)));
    results.push((4, "skew suites", criterion_4(&mut gaps)));
    results.push((5, "residual recurrence", criterion_5(&gaps)));
    results.push((6, "phase equivalence", criterion_6()));
    results.push((7, "rank reveal", criterion_7()));
    results.push((8, "estimator bounds", criterion_8()));
    results.push((9, "SymOrtho properties", criterion_9()));
    results.push((10, "preconditioner identity", criterion_10()));
    results.push((11, "degenerate contracts", criterion_11()));

    let mut failed = 0;
    for (id, name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("criterion {id:>2} {tag} {name}: {}", o.detail);
    }
    println!(
        "acceptance: {} passed, {} failed",
        results.len() - failed,
        failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
