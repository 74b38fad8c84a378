//! Seeded random test problems with prescribed structure.
//!
//! All families start from a real symmetric `A = QΛQᵀ` with `Q` a random
//! orthogonal matrix and `rank` nonzero eigenvalues whose magnitudes are
//! log-uniform in `[1e-3, 1]` with random signs. Compatible right-hand
//! sides are `b = Az` with `zᵢ ~ U(0,1)`; least-squares ones are
//! `bᵢ ~ U(0,1)`. Entries are generated on one triangle and mirrored so
//! the structure holds bit for bit.

use crate::linalg::{Scalar, Vector, ZERO};
use crate::operator::SymmetryClass;
use crate::sparse::SparseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::dense::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    /// `H = iA`.
    CsImaginary,
    /// `M = V(D + iΛ)Vᵀ`, spectrum spread over a disc.
    CsSpread,
    /// `S = tril(A) − tril(A)ᵀ`.
    SkewSymmetric,
    /// `T = S + iB`.
    SkewHermitian,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::CsImaginary => "cs-h",
            Suite::CsSpread => "cs-m",
            Suite::SkewSymmetric => "ss",
            Suite::SkewHermitian => "sh",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "cs-h" => Some(Suite::CsImaginary),
            "cs-m" => Some(Suite::CsSpread),
            "ss" => Some(Suite::SkewSymmetric),
            "sh" => Some(Suite::SkewHermitian),
            _ => None,
        }
    }

    pub fn variant(self) -> SymmetryClass {
        match self {
            Suite::CsImaginary | Suite::CsSpread => SymmetryClass::ComplexSymmetric,
            Suite::SkewSymmetric => SymmetryClass::SkewSymmetric,
            Suite::SkewHermitian => SymmetryClass::SkewHermitian,
        }
    }

    /// Generates one problem; `rank` is ignored by the skew families.
    pub fn generate(self, n: usize, rank: usize, seed: u64, compatible: bool) -> GeneratedProblem {
        match self {
            Suite::CsImaginary => gen_cs_spectrum_imaginary(n, rank, seed, compatible),
            Suite::CsSpread => gen_cs_spread(n, rank, seed, compatible),
            Suite::SkewSymmetric => gen_skew_symmetric(n, seed, compatible),
            Suite::SkewHermitian => gen_skew_hermitian(n, seed, compatible),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GeneratedProblem {
    pub a: SparseMatrix,
    pub b: Vector,
    pub variant: SymmetryClass,
    pub compatible: bool,
    pub seed: u64,
    /// Rank by construction; for the skew families, the rank of the
    /// generic matrix (`n − 1` for odd `n`).
    pub rank: usize,
}

impl GeneratedProblem {
    pub fn dense(&self) -> DenseMatrix {
        DenseMatrix::from_sparse(&self.a)
    }
}

/// Random `n × n` real orthogonal matrix: modified Gram-Schmidt, applied
/// twice, on a Gaussian matrix. Row-major.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect();
    for j in 0..n {
        for _ in 0..2 {
            for i in 0..j {
                let (head, tail) = cols.split_at_mut(j);
                let d: f64 = head[i].iter().zip(tail[0].iter()).map(|(a, b)| a * b).sum();
                for (x, y) in tail[0].iter_mut().zip(head[i].iter()) {
                    *x -= d * y;
                }
            }
        }
        let nrm = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= nrm;
        }
    }
    (0..n)
        .map(|i| (0..n).map(|j| cols[j][i]).collect())
        .collect()
}

fn spectrum(n: usize, rank: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i < rank {
                let mag = 10f64.powf(rng.random_range(-3.0..0.0));
                if rng.random::<f64>() < 0.5 {
                    -mag
                } else {
                    mag
                }
            } else {
                0.0
            }
        })
        .collect()
}

/// `Σₖ q_ik·dₖ·q_jk` for `i ≤ j`, mirrored.
fn symmetric_from_eigen(q: &[Vec<f64>], d: &[Scalar]) -> Vec<Vec<Scalar>> {
    let n = q.len();
    let mut a = vec![vec![ZERO; n]; n];
    for i in 0..n {
        for j in i..n {
            let mut acc = ZERO;
            for k in 0..n {
                acc += d[k] * (q[i][k] * q[j][k]);
            }
            a[i][j] = acc;
            a[j][i] = acc;
        }
    }
    a
}

fn source_symmetric(n: usize, rank: usize, rng: &mut ChaCha8Rng) -> (Vec<Vec<f64>>, Vec<f64>) {
    let q = random_orthogonal(n, rng);
    let lambda = spectrum(n, rank, rng);
    (q, lambda)
}

fn real_dense(q: &[Vec<f64>], lambda: &[f64]) -> Vec<Vec<f64>> {
    let d: Vec<Scalar> = lambda.iter().map(|&l| Scalar::new(l, 0.0)).collect();
    symmetric_from_eigen(q, &d)
        .into_iter()
        .map(|row| row.into_iter().map(|v| v.re).collect())
        .collect()
}

fn to_sparse(rows: &[Vec<Scalar>]) -> SparseMatrix {
    SparseMatrix::from_dense(rows).expect("square by construction")
}

fn rhs(a: &SparseMatrix, compatible: bool, rng: &mut ChaCha8Rng) -> Vector {
    let n = a.dim();
    let u: Vec<Scalar> = (0..n)
        .map(|_| Scalar::new(rng.random::<f64>(), 0.0))
        .collect();
    if compatible {
        a.apply(&u).expect("dimensions match")
    } else {
        u.into()
    }
}

/// `H = iA` with `A` real symmetric of the given rank.
pub fn gen_cs_spectrum_imaginary(
    n: usize,
    rank: usize,
    seed: u64,
    compatible: bool,
) -> GeneratedProblem {
    assert!(rank <= n, "rank exceeds dimension");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (q, lambda) = source_symmetric(n, rank, &mut rng);
    let d: Vec<Scalar> = lambda.iter().map(|&l| Scalar::new(0.0, l)).collect();
    let a = to_sparse(&symmetric_from_eigen(&q, &d));
    let b = rhs(&a, compatible, &mut rng);
    GeneratedProblem {
        a,
        b,
        variant: SymmetryClass::ComplexSymmetric,
        compatible,
        seed,
        rank,
    }
}

/// `M = V D Vᵀ + iA` with `A = VΛVᵀ` and `dᵢ = (2uᵢ − 1)|λ₁|` where
/// `λᵢ ≠ 0`, so `M` keeps the rank of `A`.
pub fn gen_cs_spread(n: usize, rank: usize, seed: u64, compatible: bool) -> GeneratedProblem {
    assert!(rank <= n, "rank exceeds dimension");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (v, lambda) = source_symmetric(n, rank, &mut rng);
    let lam1 = lambda.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let d: Vec<Scalar> = lambda
        .iter()
        .map(|&l| {
            let u = rng.random::<f64>();
            if l != 0.0 {
                Scalar::new((2.0 * u - 1.0) * lam1, l)
            } else {
                ZERO
            }
        })
        .collect();
    let a = to_sparse(&symmetric_from_eigen(&v, &d));
    let b = rhs(&a, compatible, &mut rng);
    GeneratedProblem {
        a,
        b,
        variant: SymmetryClass::ComplexSymmetric,
        compatible,
        seed,
        rank,
    }
}

/// `S = tril(A) − tril(A)ᵀ` with `A` full rank. Odd `n` makes `S` singular.
pub fn gen_skew_symmetric(n: usize, seed: u64, compatible: bool) -> GeneratedProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (q, lambda) = source_symmetric(n, n, &mut rng);
    let a = real_dense(&q, &lambda);
    let mut s = vec![vec![ZERO; n]; n];
    for i in 0..n {
        for j in 0..i {
            s[i][j] = Scalar::new(a[i][j], 0.0);
            s[j][i] = Scalar::new(-a[i][j], 0.0);
        }
    }
    let a = to_sparse(&s);
    let b = rhs(&a, compatible, &mut rng);
    GeneratedProblem {
        a,
        b,
        variant: SymmetryClass::SkewSymmetric,
        compatible,
        seed,
        rank: n - n % 2,
    }
}

/// `T = S + iB`, `B` the off-diagonal part of `A`. One row and column of
/// the source `A` are zeroed so that `T` is singular for every `n`.
pub fn gen_skew_hermitian(n: usize, seed: u64, compatible: bool) -> GeneratedProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (q, lambda) = source_symmetric(n, n, &mut rng);
    let mut a = real_dense(&q, &lambda);
    let dead = rng.random_range(0..n.max(1));
    for i in 0..n {
        a[dead][i] = 0.0;
        a[i][dead] = 0.0;
    }
    let mut t = vec![vec![ZERO; n]; n];
    for i in 0..n {
        for j in 0..i {
            // lower: S_ij = a_ij, upper: S_ji = -a_ij; B_ij = B_ji = a_ij
            t[i][j] = Scalar::new(a[i][j], a[i][j]);
            t[j][i] = -t[i][j].conj();
        }
    }
    let a = to_sparse(&t);
    let b = rhs(&a, compatible, &mut rng);
    GeneratedProblem {
        a,
        b,
        variant: SymmetryClass::SkewHermitian,
        compatible,
        seed,
        rank: n.saturating_sub(1),
    }
}
