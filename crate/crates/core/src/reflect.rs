//! 2×2 Householder reflectors `[c s; s̄ -c]` with real `c`.

use crate::linalg::{Scalar, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflection {
    pub c: f64,
    pub s: Scalar,
    pub r: Scalar,
}

impl Reflection {
    pub const IDENTITY: Reflection = Reflection {
        c: 1.0,
        s: ZERO,
        r: ZERO,
    };

    /// `[c s; s̄ -c] (a, b)ᵀ`, which is also the row form `[a b] [c s̄; s -c]`
    /// used for right reflections.
    pub fn apply(&self, a: Scalar, b: Scalar) -> (Scalar, Scalar) {
        (self.c * a + self.s * b, self.s.conj() * a - self.c * b)
    }
}

/// Stable reflector sending `(a, b)` to `(r, 0)`.
///
/// Divides by the larger of `|a|`, `|b|` only, so inputs anywhere in the
/// normal range neither overflow nor underflow.
pub fn sym_ortho(a: Scalar, b: Scalar) -> Reflection {
    let abs_a = a.norm();
    let abs_b = b.norm();
    if abs_b == 0.0 {
        Reflection {
            c: 1.0,
            s: ZERO,
            r: a,
        }
    } else if abs_a == 0.0 {
        Reflection {
            c: 0.0,
            s: ONE,
            r: b,
        }
    } else if abs_b >= abs_a {
        let tau = abs_a / abs_b;
        let c0 = 1.0 / (1.0 + tau * tau).sqrt();
        let s = c0 * tau * (b / a).conj();
        let c = c0 * tau;
        Reflection {
            c,
            s,
            r: b / s.conj(),
        }
    } else {
        let tau = abs_b / abs_a;
        let c = 1.0 / (1.0 + tau * tau).sqrt();
        let s = c * (b / a).conj();
        Reflection { c, s, r: a / c }
    }
}
