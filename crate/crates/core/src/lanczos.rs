//! Lanczos-like tridiagonalization, one column of `T̲ₖ` per step.
//!
//! * complex symmetric (Saunders process): `A v̄ₖ = βₖvₖ₋₁ + αₖvₖ + βₖ₊₁vₖ₊₁`
//! * skew symmetric: `A vₖ = βₖvₖ₋₁ − βₖ₊₁vₖ₊₁`, `αₖ = 0`
//! * Hermitian: the classical process
//! * skew Hermitian: the Hermitian process on `iA` started from `ib`
//!
//! With a preconditioner `M` the same recurrences run on `zₖ` with
//! `qₖ = M⁻¹zₖ` (conjugated for the complex symmetric case) and
//! `βₖ² = qₖᵀzₖ` or `zₖ*qₖ`.

use crate::linalg::{axpy_mut, dot_h, dot_t, hypot_n, norm, Scalar, Vector, EPS, I, ZERO};
use crate::operator::{LinearOperator, SymmetryClass};
use crate::precond::Preconditioner;
use crate::{Error, Result};

const BREAKDOWN_TOL: f64 = 1e-10;

/// Column `k` of `T̲ₖ`: `T[k-1,k] = βₖ`, `T[k,k] = αₖ`, `T[k+1,k] = ±βₖ₊₁`
/// (minus for the skew symmetric process).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosColumn {
    pub k: usize,
    pub alpha: Scalar,
    pub beta: f64,
    pub beta_next: f64,
    pub skew: bool,
}

impl LanczosColumn {
    /// Subdiagonal entry `T[k+1,k]`.
    pub fn sub(&self) -> Scalar {
        let b = Scalar::new(self.beta_next, 0.0);
        if self.skew {
            -b
        } else {
            b
        }
    }

    /// `ρₖ = ‖[βₖ αₖ βₖ₊₁]‖`.
    pub fn rho(&self) -> f64 {
        if self.k == 1 {
            hypot_n(&[self.alpha.norm(), self.beta_next])
        } else {
            hypot_n(&[self.beta, self.alpha.norm(), self.beta_next])
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Form {
    /// Bilinear `xᵀy`, direction `v̄ₖ`.
    Bilinear,
    /// Sesquilinear `x*y`, direction `vₖ`.
    Sesquilinear,
    /// Two-term skew recurrence.
    Skew,
}

pub struct TridiagState<'a> {
    op: &'a dyn LinearOperator,
    precond: Option<&'a Preconditioner>,
    variant: SymmetryClass,
    form: Form,
    /// Scalar applied to `A x` (i for the skew Hermitian process).
    op_scale: Scalar,
    /// Effective shift on the transformed operator.
    shift: Scalar,
    n: usize,
    k: usize,
    beta1: f64,
    beta_curr: f64,
    alpha: Scalar,
    beta_next: f64,
    rho_max: f64,
    terminated: bool,
    v_prev: Vector,
    v_curr: Vector,
    u_curr: Vector,
    u_last: Vector,
    p: Vector,
    basis: Option<Vec<Vector>>,
}

impl<'a> TridiagState<'a> {
    /// Starts the process matching `variant`. `shift` is the shift of the
    /// original operator `A − σI`; the skew Hermitian process turns it into
    /// `iσ` on `iA`.
    pub fn new(
        op: &'a dyn LinearOperator,
        b: &[Scalar],
        variant: SymmetryClass,
        shift: Scalar,
        precond: Option<&'a Preconditioner>,
    ) -> Result<Self> {
        let n = op.dim();
        if b.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: b.len(),
            });
        }
        if let Some(m) = precond {
            if m.dim() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: m.dim(),
                });
            }
        }
        let (form, op_scale, eff_shift, start_scale) = match variant {
            SymmetryClass::ComplexSymmetric => (
                Form::Bilinear,
                Scalar::new(1.0, 0.0),
                shift,
                Scalar::new(1.0, 0.0),
            ),
            SymmetryClass::Hermitian => (
                Form::Sesquilinear,
                Scalar::new(1.0, 0.0),
                shift,
                Scalar::new(1.0, 0.0),
            ),
            SymmetryClass::SkewHermitian => (Form::Sesquilinear, I, I * shift, I),
            SymmetryClass::SkewSymmetric => {
                if b.iter().any(|v| v.im != 0.0) {
                    return Err(Error::ComplexSkewData);
                }
                (
                    Form::Skew,
                    Scalar::new(1.0, 0.0),
                    ZERO,
                    Scalar::new(1.0, 0.0),
                )
            }
        };

        let mut z: Vector = b.iter().map(|v| start_scale * v).collect::<Vec<_>>().into();
        let mut q = Vector::zeros(n);
        let beta1 = match precond {
            None => norm(&z),
            Some(m) => {
                m.solve_into(&z, &mut q);
                if form == Form::Bilinear {
                    conj_in_place(&mut q);
                }
                precond_beta(m, form, &q, &z, 0)?
            }
        };

        let mut state = TridiagState {
            op,
            precond,
            variant,
            form,
            op_scale,
            shift: eff_shift,
            n,
            k: 0,
            beta1,
            beta_curr: beta1,
            alpha: ZERO,
            beta_next: beta1,
            rho_max: 0.0,
            terminated: beta1 == 0.0,
            v_prev: Vector::zeros(n),
            v_curr: Vector::zeros(n),
            u_curr: Vector::zeros(n),
            u_last: Vector::zeros(n),
            p: Vector::zeros(n),
            basis: None,
        };
        if beta1 > 0.0 {
            let inv = 1.0 / beta1;
            for zi in z.iter_mut() {
                *zi *= inv;
            }
            if precond.is_some() {
                for qi in q.iter_mut() {
                    *qi *= inv;
                }
            } else {
                q = direction_of(form, &z);
            }
            state.v_curr = z;
            state.u_curr = q;
        }
        Ok(state)
    }

    /// Saunders process for complex symmetric `A − σI`.
    pub fn saunders(op: &'a dyn LinearOperator, b: &[Scalar], shift: Scalar) -> Result<Self> {
        Self::new(op, b, SymmetryClass::ComplexSymmetric, shift, None)
    }

    pub fn skew_symmetric(op: &'a dyn LinearOperator, b: &[Scalar]) -> Result<Self> {
        Self::new(op, b, SymmetryClass::SkewSymmetric, ZERO, None)
    }

    pub fn skew_hermitian(op: &'a dyn LinearOperator, b: &[Scalar], shift: Scalar) -> Result<Self> {
        Self::new(op, b, SymmetryClass::SkewHermitian, shift, None)
    }

    /// Keeps every basis vector and reorthogonalizes each new one against
    /// all of them. Meant for small reference runs.
    pub fn with_full_reorthogonalization(mut self) -> Self {
        if self.precond.is_none() {
            let mut basis = Vec::new();
            if self.beta1 > 0.0 {
                basis.push(self.v_curr.clone());
            }
            self.basis = Some(basis);
        }
        self
    }

    pub fn variant(&self) -> SymmetryClass {
        self.variant
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Index of the last column produced.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn is_degenerate(&self) -> bool {
        self.beta1 == 0.0
    }

    /// `βₖ₊₁` was declared zero, or `β₁ = 0`.
    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    pub fn alpha(&self) -> Scalar {
        self.alpha
    }

    pub fn beta_curr(&self) -> f64 {
        self.beta_curr
    }

    pub fn beta_next(&self) -> f64 {
        self.beta_next
    }

    /// `vₖ₊₁`, the vector the next step starts from (`zₖ₊₁/βₖ₊₁` when
    /// preconditioned).
    pub fn v_next(&self) -> &[Scalar] {
        &self.v_curr
    }

    /// `vₖ`, the basis vector of the last column.
    pub fn v_last(&self) -> &[Scalar] {
        &self.v_prev
    }

    /// Direction used by the solution update for the last column: `v̄ₖ`,
    /// `vₖ`, or `qₖ/βₖ` when preconditioned.
    pub fn direction(&self) -> &[Scalar] {
        &self.u_last
    }

    /// Produces column `k+1`.
    pub fn step(&mut self) -> Result<LanczosColumn> {
        assert!(!self.terminated, "Lanczos process already terminated");
        self.k += 1;
        let k = self.k;
        let beta_k = self.beta_next;

        self.op.apply(&self.u_curr, &mut self.p);
        if self.op_scale != Scalar::new(1.0, 0.0) {
            for pi in self.p.iter_mut() {
                *pi *= self.op_scale;
            }
        }
        if self.shift != ZERO {
            axpy_mut(-self.shift, &self.u_curr, &mut self.p);
        }
        if k > 1 {
            axpy_mut(Scalar::new(-beta_k, 0.0), &self.v_prev, &mut self.p);
        }

        let alpha = match self.form {
            Form::Bilinear => dot_t(&self.u_curr, &self.p),
            Form::Sesquilinear => Scalar::new(dot_h(&self.u_curr, &self.p).re, 0.0),
            Form::Skew => ZERO,
        };
        if self.form == Form::Skew {
            for pi in self.p.iter_mut() {
                *pi = -*pi;
            }
        } else {
            axpy_mut(-alpha, &self.v_curr, &mut self.p);
        }
        if let Some(basis) = &self.basis {
            for _ in 0..2 {
                for v in basis {
                    let h = dot_h(v, &self.p);
                    axpy_mut(-h, v, &mut self.p);
                }
            }
        }

        let mut q = Vector::zeros(self.n);
        let raw_beta = match self.precond {
            None => norm(&self.p),
            Some(m) => {
                m.solve_into(&self.p, &mut q);
                if self.form == Form::Bilinear {
                    conj_in_place(&mut q);
                }
                let qz = pairing(self.form, &q, &self.p);
                qz.norm().sqrt()
            }
        };

        let rho = if k == 1 {
            hypot_n(&[alpha.norm(), raw_beta])
        } else {
            hypot_n(&[beta_k, alpha.norm(), raw_beta])
        };
        self.rho_max = self.rho_max.max(rho);
        let beta_next = if raw_beta <= self.n as f64 * self.rho_max * EPS {
            self.terminated = true;
            0.0
        } else if let Some(m) = self.precond {
            precond_beta(m, self.form, &q, &self.p, k)?
        } else {
            raw_beta
        };

        std::mem::swap(&mut self.u_last, &mut self.u_curr);
        std::mem::swap(&mut self.v_prev, &mut self.v_curr);
        if beta_next > 0.0 {
            let inv = 1.0 / beta_next;
            let mut v = std::mem::take(&mut self.p);
            for vi in v.iter_mut() {
                *vi *= inv;
            }
            self.u_curr = match self.precond {
                None => direction_of(self.form, &v),
                Some(_) => {
                    for qi in q.iter_mut() {
                        *qi *= inv;
                    }
                    q
                }
            };
            if let Some(basis) = &mut self.basis {
                basis.push(v.clone());
            }
            self.p = std::mem::replace(&mut self.v_curr, v);
        } else {
            self.v_curr.fill(ZERO);
            self.u_curr.fill(ZERO);
        }

        self.alpha = alpha;
        self.beta_curr = beta_k;
        self.beta_next = beta_next;
        Ok(LanczosColumn {
            k,
            alpha,
            beta: beta_k,
            beta_next,
            skew: self.form == Form::Skew,
        })
    }
}

fn conj_in_place(x: &mut [Scalar]) {
    for xi in x.iter_mut() {
        *xi = xi.conj();
    }
}

fn direction_of(form: Form, v: &[Scalar]) -> Vector {
    match form {
        Form::Bilinear => v.iter().map(|x| x.conj()).collect::<Vec<_>>().into(),
        _ => v.to_vec().into(),
    }
}

/// `qᵀz` for the bilinear form, `z*q` otherwise.
fn pairing(form: Form, q: &[Scalar], z: &[Scalar]) -> Scalar {
    match form {
        Form::Bilinear => dot_t(q, z),
        _ => dot_h(z, q),
    }
}

/// `β = √(qᵀz)` or `√(z*q)`. For `M = I` this is `‖z‖`, computed as in the
/// unpreconditioned process.
fn precond_beta(
    m: &Preconditioner,
    form: Form,
    q: &[Scalar],
    z: &[Scalar],
    iteration: usize,
) -> Result<f64> {
    if m.is_identity() {
        Ok(norm(z))
    } else {
        checked_sqrt(pairing(form, q, z), iteration, BREAKDOWN_TOL)
    }
}

fn checked_sqrt(qz: Scalar, iteration: usize, tol: f64) -> Result<f64> {
    if qz == ZERO {
        return Ok(0.0);
    }
    if qz.re <= 0.0 || qz.im.abs() > tol * qz.norm() {
        return Err(Error::PreconditionerBreakdown {
            iteration,
            re: qz.re,
            im: qz.im,
        });
    }
    Ok(qz.re.sqrt())
}
