//! Two-phase MINRES / MINRES-QLP engine.
//!
//! Each iteration takes one column of `T̲ₖ` from the Lanczos-like process,
//! updates the QR factorization (left reflections) and the QLP factorization
//! (right reflections) of `T̲ₖ`, and advances either the MINRES solution
//! `xₖ = xₖ₋₁ + τₖdₖ` or the QLP solution `xₖ = Wₖuₖ`. The MINRES phase is
//! cheaper; the QLP phase returns the minimum-length solution on singular
//! problems. The switch happens once, when the condition estimate reaches
//! `trancond`.

use std::fmt;

use crate::lanczos::{LanczosColumn, TridiagState};
use crate::linalg::{axpy_mut, hypot_n, Scalar, Vector, EPS, ONE, ZERO};
use crate::operator::{probe_symmetry, LinearOperator, SymmetryClass};
use crate::precond::Preconditioner;
use crate::reflect::{sym_ortho, Reflection};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Relative tolerance of both backward-error tests; values below `ε`
    /// act as `ε`.
    pub tol: f64,
    pub maxit: usize,
    pub maxxnorm: f64,
    pub maxcond: f64,
    /// Transfer to the QLP phase once the condition estimate reaches this.
    /// `1` runs QLP from the start, anything above `1/ε` never transfers.
    pub trancond: f64,
    /// Added to the operator's own shift.
    pub shift: Scalar,
    pub variant: SymmetryClass,
    pub preconditioner: Option<Preconditioner>,
    /// Run the randomized structure probe before iterating.
    pub check_symmetry: bool,
    /// Full reorthogonalization of the Lanczos vectors. Reference runs only.
    pub reorthogonalize: bool,
}

impl SolverConfig {
    pub fn for_dim(n: usize, variant: SymmetryClass) -> Self {
        SolverConfig {
            tol: EPS,
            maxit: 4 * n.max(1),
            maxxnorm: 1e7,
            maxcond: 1e15,
            trancond: 1e7,
            shift: ZERO,
            variant,
            preconditioner: None,
            check_symmetry: true,
            reorthogonalize: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if !(self.tol >= 0.0) {
            return bad("tol must be nonnegative");
        }
        if self.maxit < 1 {
            return bad("maxit must be at least 1");
        }
        if !(self.maxxnorm > 0.0) || !(self.maxcond > 0.0) || !(self.trancond > 0.0) {
            return bad("maxxnorm, maxcond and trancond must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StopReason {
    ConvergedRnorm,
    ConvergedArNorm,
    BetaZeroXZero,
    Beta2ZeroOneStep,
    GammaZero,
    MaxIt,
    CondExceeded,
    XnormExceeded,
    LanczosExhausted,
    NotStructured,
    PreconditionerBreakdown,
}

impl StopReason {
    pub fn name(self) -> &'static str {
        match self {
            StopReason::ConvergedRnorm => "Converged_Rnorm",
            StopReason::ConvergedArNorm => "Converged_ArNorm",
            StopReason::BetaZeroXZero => "BetaZero_xZero",
            StopReason::Beta2ZeroOneStep => "Beta2Zero_OneStep",
            StopReason::GammaZero => "GammaZero",
            StopReason::MaxIt => "MaxIt",
            StopReason::CondExceeded => "CondExceeded",
            StopReason::XnormExceeded => "XnormExceeded",
            StopReason::LanczosExhausted => "LanczosExhausted",
            StopReason::NotStructured => "NotStructured",
            StopReason::PreconditionerBreakdown => "PreconditionerBreakdown",
        }
    }

    pub fn is_converged(self) -> bool {
        matches!(
            self,
            StopReason::ConvergedRnorm | StopReason::ConvergedArNorm
        )
    }

    pub fn is_regularization(self) -> bool {
        matches!(self, StopReason::CondExceeded | StopReason::XnormExceeded)
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Minres,
    Qlp,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub x: Vector,
    pub reason: StopReason,
    pub iterations: usize,
    pub transfer_iteration: Option<usize>,
    /// `‖r‖` estimate.
    pub phi: f64,
    /// `‖A*r‖` estimate.
    pub psi: f64,
    /// `‖x‖` estimate.
    pub chi: f64,
    pub anorm: f64,
    pub acond: f64,
    /// `‖Ax‖` estimate.
    pub omega: f64,
}

/// Snapshot handed to the monitor after every iteration.
#[derive(Debug, Clone, Copy)]
pub struct IterationInfo<'a> {
    pub k: usize,
    /// Phase that produced `x`.
    pub phase: Phase,
    pub column: LanczosColumn,
    pub phi: f64,
    /// Lagged `ψₖ₋₁ = ‖A*rₖ₋₁‖` estimate.
    pub psi_prev: f64,
    pub chi: f64,
    pub anorm: f64,
    pub acond: f64,
    pub omega: f64,
    pub gamma_min: f64,
    /// `γ₂ₖ`, the last diagonal of the QR factor `Rₖ`.
    pub r_diag: Scalar,
    /// Trailing diagonal of `Lₖ`: `[γ⁽⁶⁾ₖ₋₂, γ⁽⁵⁾ₖ₋₁, γ⁽⁴⁾ₖ]`, zeros where
    /// `k` is too small.
    pub l_diag: [Scalar; 3],
    /// `μₖ` was set to zero because `γ⁽⁴⁾ₖ` vanished.
    pub mu_zeroed: bool,
    pub x: &'a [Scalar],
    pub stop: Option<StopReason>,
}

/// Solves `(A − σI) x ≈ b`.
pub fn solve(op: &dyn LinearOperator, b: &[Scalar], config: &SolverConfig) -> Result<SolveReport> {
    solve_with_monitor(op, b, config, |_| {})
}

/// [`solve`] with a callback invoked after every iteration.
pub fn solve_with_monitor<F>(
    op: &dyn LinearOperator,
    b: &[Scalar],
    config: &SolverConfig,
    mut monitor: F,
) -> Result<SolveReport>
where
    F: FnMut(&IterationInfo<'_>),
{
    config.validate()?;
    let n = op.dim();
    if b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: b.len(),
        });
    }
    if op.symmetry() != config.variant {
        return Err(Error::VariantMismatch {
            operator: op.symmetry(),
            requested: config.variant,
        });
    }
    let shift = op.shift() + config.shift;
    check_shift(shift, config.variant)?;

    let mut tri = TridiagState::new(op, b, config.variant, shift, config.preconditioner.as_ref())?;
    if config.reorthogonalize {
        tri = tri.with_full_reorthogonalization();
    }
    if tri.is_degenerate() {
        return Ok(SolveReport {
            x: Vector::zeros(n),
            reason: StopReason::BetaZeroXZero,
            iterations: 0,
            transfer_iteration: None,
            phi: 0.0,
            psi: 0.0,
            chi: 0.0,
            anorm: 0.0,
            acond: 1.0,
            omega: 0.0,
        });
    }
    if config.check_symmetry {
        probe_symmetry(op, config.variant)?;
    }

    let mut engine = Engine::new(n, tri.beta1(), config);
    loop {
        let column = tri.step()?;
        let stop = engine.iterate(&column, tri.direction(), config);
        monitor(&engine.info(&column, stop));
        if let Some(reason) = stop {
            let psi = if tri.is_terminated() {
                0.0
            } else {
                match tri.step() {
                    Ok(next) => engine.lookahead_psi(&next),
                    Err(_) => engine.psi_prev,
                }
            };
            return Ok(engine.into_report(reason, psi));
        }
    }
}

fn check_shift(shift: Scalar, variant: SymmetryClass) -> Result<()> {
    let ok = match variant {
        SymmetryClass::ComplexSymmetric => true,
        SymmetryClass::Hermitian => shift.im == 0.0,
        SymmetryClass::SkewHermitian => shift.re == 0.0,
        SymmetryClass::SkewSymmetric => shift == ZERO,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidShift {
            re: shift.re,
            im: shift.im,
            variant,
        })
    }
}

/// Previous left reflection `Qₖ₋₁` applied to column `k` of `T̲ₖ` and the
/// superdiagonal `βₖ₊₁` of column `k+1`.
///
/// Returns `(δ⁽²⁾ₖ, γₖ, εₖ₊₁, δₖ₊₁)`.
pub fn left_reflect_prev(
    prev: &Reflection,
    delta: Scalar,
    alpha: Scalar,
    beta_next: f64,
) -> (Scalar, Scalar, Scalar, Scalar) {
    let (delta2, gamma) = prev.apply(delta, alpha);
    let (eps_next, delta_next) = prev.apply(ZERO, Scalar::new(beta_next, 0.0));
    (delta2, gamma, eps_next, delta_next)
}

/// Current left reflection annihilating the subdiagonal entry.
///
/// Returns the reflection (with `r = γ⁽²⁾ₖ`), `τₖ` and the new `φₖ`.
pub fn left_reflect_curr(
    gamma: Scalar,
    sub: Scalar,
    phi_prev: Scalar,
) -> (Reflection, Scalar, Scalar) {
    let q = sym_ortho(gamma, sub);
    let (tau, phi) = q.apply(phi_prev, ZERO);
    (q, tau, phi)
}

/// Entries of the trailing `3×3` block of `Lₖ` after both right reflections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RightReflected {
    pub p2: Option<Reflection>,
    pub p3: Option<Reflection>,
    /// `γ⁽⁶⁾ₖ₋₂`
    pub gamma6_km2: Scalar,
    /// `ϑ⁽²⁾ₖ₋₁`
    pub theta2_km1: Scalar,
    /// `γ⁽⁵⁾ₖ₋₁`
    pub gamma5_km1: Scalar,
    /// `ηₖ`
    pub eta: Scalar,
    /// `ϑₖ`
    pub theta: Scalar,
    /// `γ⁽⁴⁾ₖ`
    pub gamma4: Scalar,
}

/// Right reflections `Pₖ₋₂,ₖ` (zeroing `εₖ`) and `Pₖ₋₁,ₖ` (zeroing
/// `δ⁽³⁾ₖ`). Both are skipped while `k` is too small for them to exist.
pub fn right_reflect_pair(
    k: usize,
    gamma5_km2: Scalar,
    eps: Scalar,
    theta_km1: Scalar,
    delta2: Scalar,
    gamma2: Scalar,
    gamma4_km1: Scalar,
) -> RightReflected {
    let (p2, gamma6_km2, theta2_km1, delta3, eta, gamma3) = if k > 2 {
        let p = sym_ortho(gamma5_km2, eps);
        let (theta2, delta3) = p.apply(theta_km1, delta2);
        let (eta, gamma3) = p.apply(ZERO, gamma2);
        (Some(p), p.r, theta2, delta3, eta, gamma3)
    } else {
        (None, ZERO, theta_km1, delta2, ZERO, gamma2)
    };
    let (p3, gamma5_km1, theta, gamma4) = if k > 1 {
        let p = sym_ortho(gamma4_km1, delta3);
        let (theta, gamma4) = p.apply(ZERO, gamma3);
        (Some(p), p.r, theta, gamma4)
    } else {
        (None, ZERO, ZERO, gamma3)
    };
    RightReflected {
        p2,
        p3,
        gamma6_km2,
        theta2_km1,
        gamma5_km1,
        eta,
        theta,
        gamma4,
    }
}

fn safe_div(num: Scalar, den: Scalar) -> Scalar {
    if den == ZERO {
        ZERO
    } else {
        num / den
    }
}

struct Engine {
    n: usize,
    beta1: f64,
    k: usize,
    phase: Phase,
    transfer_iteration: Option<usize>,

    prev_left: Reflection,
    delta: Scalar,
    eps: Scalar,
    phi: Scalar,
    phi_report: f64,
    psi_prev: f64,

    gamma5_km2: Scalar,
    gamma4_km1: Scalar,
    theta_km1: Scalar,
    theta2_km2: Scalar,
    eta_km1: Scalar,
    eta_km2: Scalar,
    tau_km1: Scalar,
    tau_km2: Scalar,

    // final μ values
    mu_km3: Scalar,
    mu_km4: Scalar,
    // provisional μₖ₋₁, μₖ from the last iteration
    mu_prov_km1: Scalar,
    mu_prov_k: Scalar,

    chi_km3: f64,
    chi: f64,
    anorm: f64,
    gamma_min: f64,
    kappa: f64,
    omega: f64,

    // per-iteration values kept for the monitor
    gamma2: Scalar,
    l_diag: [Scalar; 3],
    mu_zeroed: bool,

    // MINRES phase
    d_km1: Vector,
    d_km2: Vector,
    // QLP phase
    w_km1: Vector,
    w_km2: Vector,
    x_km3: Vector,
    x: Vector,
}

impl Engine {
    fn new(n: usize, beta1: f64, config: &SolverConfig) -> Self {
        let phase = if 1.0 >= config.trancond {
            Phase::Qlp
        } else {
            Phase::Minres
        };
        Engine {
            n,
            beta1,
            k: 0,
            phase,
            transfer_iteration: if phase == Phase::Qlp { Some(1) } else { None },
            prev_left: Reflection {
                c: -1.0,
                s: ZERO,
                r: ZERO,
            },
            delta: ZERO,
            eps: ZERO,
            phi: Scalar::new(beta1, 0.0),
            phi_report: beta1,
            psi_prev: 0.0,
            gamma5_km2: ZERO,
            gamma4_km1: ZERO,
            theta_km1: ZERO,
            theta2_km2: ZERO,
            eta_km1: ZERO,
            eta_km2: ZERO,
            tau_km1: ZERO,
            tau_km2: ZERO,
            mu_km3: ZERO,
            mu_km4: ZERO,
            mu_prov_km1: ZERO,
            mu_prov_k: ZERO,
            chi_km3: 0.0,
            chi: 0.0,
            anorm: 0.0,
            gamma_min: f64::INFINITY,
            kappa: 1.0,
            omega: 0.0,
            gamma2: ZERO,
            l_diag: [ZERO; 3],
            mu_zeroed: false,
            d_km1: Vector::zeros(n),
            d_km2: Vector::zeros(n),
            w_km1: Vector::zeros(n),
            w_km2: Vector::zeros(n),
            x_km3: Vector::zeros(n),
            x: Vector::zeros(n),
        }
    }

    fn zero_threshold(&self) -> f64 {
        EPS * self.anorm.max(1.0)
    }

    /// One iteration for column `k`; returns a stop reason if one fired.
    fn iterate(
        &mut self,
        col: &LanczosColumn,
        u: &[Scalar],
        config: &SolverConfig,
    ) -> Option<StopReason> {
        self.k = col.k;
        let k = col.k;
        let tol = config.tol.max(EPS);

        let (delta2, gamma, eps_next, delta_next) =
            left_reflect_prev(&self.prev_left, self.delta, col.alpha, col.beta_next);
        let phi_prev = self.phi;
        let (q1, tau, phi) = left_reflect_curr(gamma, col.sub(), phi_prev);
        let gamma2 = q1.r;
        self.psi_prev = phi_prev.norm() * hypot_n(&[gamma.norm(), delta_next.norm()]);

        let rr = right_reflect_pair(
            k,
            self.gamma5_km2,
            self.eps,
            self.theta_km1,
            delta2,
            gamma2,
            self.gamma4_km1,
        );

        let mut l_vals = vec![rr.gamma4.norm()];
        if k > 1 {
            l_vals.push(rr.gamma5_km1.norm());
        }
        if k > 2 {
            l_vals.push(rr.gamma6_km2.norm());
        }
        let rho = col.rho();
        self.anorm = l_vals.iter().cloned().fold(self.anorm.max(rho), f64::max);
        self.gamma_min = l_vals.iter().cloned().fold(self.gamma_min, f64::min);
        self.kappa = if self.gamma_min > 0.0 {
            self.anorm / self.gamma_min
        } else {
            f64::INFINITY
        };
        self.omega = self.omega.hypot(tau.norm());
        let gz = self.zero_threshold();

        let mu_km2 = if k > 2 {
            safe_div(
                self.tau_km2 - self.eta_km2 * self.mu_km4 - self.theta2_km2 * self.mu_km3,
                rr.gamma6_km2,
            )
        } else {
            ZERO
        };
        let mu_km1 = if k > 1 {
            safe_div(
                self.tau_km1 - self.eta_km1 * self.mu_km3 - rr.theta2_km1 * mu_km2,
                rr.gamma5_km1,
            )
        } else {
            ZERO
        };
        let gamma_zero = rr.gamma4.norm() < gz;
        let mu_k = if gamma_zero {
            ZERO
        } else {
            (tau - rr.eta * mu_km2 - rr.theta * mu_km1) / rr.gamma4
        };

        let chi_km2 = if k > 2 {
            self.chi_km3.hypot(mu_km2.norm())
        } else {
            0.0
        };
        let mut chi = hypot_n(&[chi_km2, mu_km1.norm(), mu_k.norm()]);
        let (mut use_mu_km1, mut use_mu_k) = (mu_km1, mu_k);
        let mut xnorm_exceeded = false;
        if chi > config.maxxnorm {
            xnorm_exceeded = true;
            use_mu_k = ZERO;
            chi = chi_km2.hypot(mu_km1.norm());
            if chi > config.maxxnorm {
                use_mu_km1 = ZERO;
                chi = chi_km2;
            }
        }

        self.phi_report = if gamma_zero {
            phi_prev.norm()
        } else {
            phi.norm()
        };

        let gamma2_zero = gamma2.norm() < gz;
        let minres_step = self.phase == Phase::Minres && self.kappa < config.trancond;

        let mut stop = None;
        if col.beta_next == 0.0 {
            stop = Some(if k == 1 {
                StopReason::Beta2ZeroOneStep
            } else {
                StopReason::LanczosExhausted
            });
        } else if self.phi_report / (self.anorm * chi + self.beta1) <= tol {
            stop = Some(StopReason::ConvergedRnorm);
        } else if self.anorm == 0.0
            || hypot_n(&[gamma.norm(), delta_next.norm()]) / self.anorm <= tol
        {
            stop = Some(StopReason::ConvergedArNorm);
        } else if gamma_zero || (minres_step && gamma2_zero) {
            stop = Some(StopReason::GammaZero);
        } else if self.kappa >= config.maxcond.max(1.0 / EPS) {
            stop = Some(StopReason::CondExceeded);
        } else if xnorm_exceeded {
            stop = Some(StopReason::XnormExceeded);
        } else if k >= config.maxit {
            stop = Some(StopReason::MaxIt);
        }

        if minres_step {
            if !gamma2_zero && !xnorm_exceeded {
                self.minres_update(u, delta2, gamma2, tau);
            }
        } else {
            if self.phase == Phase::Minres {
                self.transfer(k);
            }
            self.qlp_update(u, &rr, mu_km2, use_mu_km1, use_mu_k);
        }

        self.gamma2 = gamma2;
        self.l_diag = [rr.gamma6_km2, rr.gamma5_km1, rr.gamma4];
        self.mu_zeroed = gamma_zero;
        self.chi = chi;

        self.prev_left = q1;
        self.delta = delta_next;
        self.eps = eps_next;
        self.phi = phi;
        if k > 1 {
            self.gamma5_km2 = rr.gamma5_km1;
        }
        self.gamma4_km1 = rr.gamma4;
        self.theta_km1 = rr.theta;
        self.theta2_km2 = rr.theta2_km1;
        self.eta_km2 = self.eta_km1;
        self.eta_km1 = rr.eta;
        self.tau_km2 = self.tau_km1;
        self.tau_km1 = tau;
        self.mu_km4 = self.mu_km3;
        self.mu_km3 = mu_km2;
        self.mu_prov_km1 = mu_km1;
        self.mu_prov_k = mu_k;
        self.chi_km3 = chi_km2;

        stop
    }

    fn minres_update(&mut self, u: &[Scalar], delta2: Scalar, gamma2: Scalar, tau: Scalar) {
        let inv = ONE / gamma2;
        let mut d = std::mem::take(&mut self.d_km2);
        for i in 0..self.n {
            d[i] = (u[i] - delta2 * self.d_km1[i] - self.eps * d[i]) * inv;
        }
        axpy_mut(tau, &d, &mut self.x);
        self.d_km2 = std::mem::replace(&mut self.d_km1, d);
    }

    /// Rebuilds `wₖ₋₂`, `wₖ₋₁` and `xₖ₋₃` from the MINRES directions at the
    /// start of iteration `k`.
    fn transfer(&mut self, k: usize) {
        let mut w_km1 = self.d_km1.scaled(self.gamma4_km1);
        let mut w_km2 = self.d_km2.scaled(self.gamma5_km2);
        axpy_mut(self.theta_km1, &self.d_km1, &mut w_km2);
        let mut x_km3 = self.x.clone();
        axpy_mut(-self.mu_prov_km1, &w_km2, &mut x_km3);
        axpy_mut(-self.mu_prov_k, &w_km1, &mut x_km3);
        std::mem::swap(&mut self.w_km1, &mut w_km1);
        std::mem::swap(&mut self.w_km2, &mut w_km2);
        self.x_km3 = x_km3;
        self.phase = Phase::Qlp;
        self.transfer_iteration = Some(k);
        self.d_km1 = Vector::default();
        self.d_km2 = Vector::default();
    }

    fn qlp_update(
        &mut self,
        u: &[Scalar],
        rr: &RightReflected,
        mu_km2: Scalar,
        mu_km1: Scalar,
        mu_k: Scalar,
    ) {
        let n = self.n;
        let mut w_k: Vector = u.into();
        if let Some(p) = rr.p2 {
            for i in 0..n {
                let (a, b) = p.apply(self.w_km2[i], u[i]);
                self.w_km2[i] = a;
                w_k[i] = b;
            }
        }
        if let Some(p) = rr.p3 {
            for i in 0..n {
                let (a, b) = p.apply(self.w_km1[i], w_k[i]);
                self.w_km1[i] = a;
                w_k[i] = b;
            }
        }
        if self.k > 2 {
            axpy_mut(mu_km2, &self.w_km2, &mut self.x_km3);
        }
        for i in 0..n {
            self.x[i] = self.x_km3[i] + mu_km1 * self.w_km1[i] + mu_k * w_k[i];
        }
        // shift the window: wₖ₋₁ becomes the next wₖ₋₂, wₖ the next wₖ₋₁
        self.w_km2 = std::mem::replace(&mut self.w_km1, w_k);
    }

    /// `ψₖ = |φₖ|·‖[γₖ₊₁ δₖ₊₂]‖` from one more Lanczos column.
    fn lookahead_psi(&self, next: &LanczosColumn) -> f64 {
        let (_, gamma, _, delta) =
            left_reflect_prev(&self.prev_left, self.delta, next.alpha, next.beta_next);
        self.phi_report * hypot_n(&[gamma.norm(), delta.norm()])
    }

    fn info<'a>(&'a self, column: &LanczosColumn, stop: Option<StopReason>) -> IterationInfo<'a> {
        IterationInfo {
            k: self.k,
            phase: self.phase,
            column: *column,
            phi: self.phi_report,
            psi_prev: self.psi_prev,
            chi: self.chi,
            anorm: self.anorm,
            acond: self.kappa,
            omega: self.omega,
            gamma_min: self.gamma_min,
            r_diag: self.gamma2,
            l_diag: self.l_diag,
            mu_zeroed: self.mu_zeroed,
            x: &self.x,
            stop,
        }
    }

    fn into_report(self, reason: StopReason, psi: f64) -> SolveReport {
        SolveReport {
            x: self.x,
            reason,
            iterations: self.k,
            transfer_iteration: self.transfer_iteration,
            phi: self.phi_report,
            psi,
            chi: self.chi,
            anorm: self.anorm,
            acond: self.kappa,
            omega: self.omega,
        }
    }
}
