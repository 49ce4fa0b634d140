//! Möller–Stetter matrices and root extraction by simultaneous
//! diagonalization.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::macaulay::ColumnOrder;
use crate::poly::{Exponent, PolySystem};
use crate::reduction::{reduce, MethodConfig, ReductionResult};

/// Multiplication matrices `M_{x_1}, ..., M_{x_n}` in a common basis.
///
/// With the conventions of [`crate::reduction`], `M_{x_i} b(z) = z_i b(z)`
/// for every root `z`: basis-value vectors are right eigenvectors.
#[derive(Debug, Clone)]
pub struct MSMatrices {
    pub mats: Vec<CMatrix>,
    pub r: usize,
    pub n: usize,
}

impl MSMatrices {
    /// Largest normalized commutator `||[M_i, M_j]||_F / (||M_i||_F ||M_j||_F)`.
    pub fn max_commutator(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let (a, b) = (&self.mats[i], &self.mats[j]);
                let scale = linalg::fro(a) * linalg::fro(b);
                if scale > 0.0 {
                    worst = worst.max(linalg::fro(&(a * b - b * a)) / scale);
                }
            }
        }
        worst
    }
}

/// Roots with per-root residuals, plus the configuration that produced them.
#[derive(Debug, Clone, Serialize)]
pub struct RootResult {
    pub roots: Vec<Vec<Complex64>>,
    pub residuals: Vec<f64>,
    pub method: MethodConfig,
    pub seed: u64,
}

impl RootResult {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// Positions of `x_i * mu` for every monomial `mu` of degree `<= d - 1`,
/// taken in column order. `i` is zero-based.
pub fn product_indices(i: usize, order: &ColumnOrder) -> Result<Vec<usize>> {
    if i >= order.n() {
        return Err(Error::InvalidInput(format!(
            "variable index {i} out of range for {} variables",
            order.n()
        )));
    }
    Ok(order.labels()[order.cut()..]
        .iter()
        .map(|mu: &Exponent| {
            order
                .position(&mu.shifted(i))
                .expect("shifted low-degree monomial lies within the order")
        })
        .collect())
}

/// `M_{x_i} = S F[idx_i]`.
pub fn build_ms(red: &ReductionResult) -> Result<MSMatrices> {
    let n = red.order.n();
    let mats = (0..n)
        .map(|i| {
            let idx = product_indices(i, &red.order)?;
            let fi = red.f.select_rows(&idx);
            Ok(red.basis.left_apply(&fi, red.cut()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MSMatrices { mats, r: red.r, n })
}

/// Greedy nearest-neighbour assignment: for each `ordered[j]` in turn, the
/// closest not-yet-used entry of `unordered` (lowest index on ties).
pub fn match_eigs(ordered: &[Complex64], unordered: &[Complex64]) -> Vec<Complex64> {
    let mut used = vec![false; unordered.len()];
    ordered
        .iter()
        .map(|&o| {
            let mut best: Option<(usize, f64)> = None;
            for (k, &u) in unordered.iter().enumerate() {
                if used[k] {
                    continue;
                }
                let dist = (u - o).norm();
                if best.is_none_or(|(_, bd)| dist < bd) {
                    best = Some((k, dist));
                }
            }
            match best {
                Some((k, _)) => {
                    used[k] = true;
                    unordered[k]
                }
                None => o,
            }
        })
        .collect()
}

/// Roots from commuting multiplication matrices: rotate coordinates by a
/// random orthogonal `W`, Schur-factor the first rotated matrix, read the
/// remaining coordinates off the same Schur basis and polish them against
/// independently computed eigenvalues, then rotate back.
pub fn sim_diag<R: Rng + ?Sized>(ms: &MSMatrices, rng: &mut R) -> Result<Vec<Vec<Complex64>>> {
    let (n, r) = (ms.n, ms.r);
    if r == 0 || ms.mats.len() != n {
        return Err(Error::InvalidInput("need n matrices of positive size".into()));
    }
    let w: DMatrix<f64> = linalg::random_orthogonal(n, rng);
    let rotated: Vec<CMatrix> = (0..n)
        .map(|j| {
            let mut acc = CMatrix::zeros(r, r);
            for i in 0..n {
                acc += &ms.mats[i] * Complex64::new(w[(j, i)], 0.0);
            }
            acc
        })
        .collect();
    let (u, t) = linalg::schur(&rotated[0])?;
    let mut y = vec![vec![Complex64::new(0.0, 0.0); n]; r];
    for k in 0..r {
        y[k][0] = t[(k, k)];
    }
    for j in 1..n {
        let tri = u.adjoint() * &rotated[j] * &u;
        let ordered: Vec<Complex64> = (0..r).map(|k| tri[(k, k)]).collect();
        let unordered = linalg::eigvals(&rotated[j])?;
        for (k, v) in match_eigs(&ordered, &unordered).into_iter().enumerate() {
            y[k][j] = v;
        }
    }
    // z = W^T y
    Ok(y
        .into_iter()
        .map(|yk| {
            (0..n)
                .map(|i| (0..n).map(|j| yk[j] * w[(j, i)]).sum())
                .collect()
        })
        .collect())
}

/// Full solve: reduction, multiplication matrices, simultaneous
/// diagonalization and residuals. One RNG seeded from `cfg.seed` feeds the
/// random combinations (if any) and then the rotation.
pub fn solve(sys: &PolySystem, cfg: &MethodConfig) -> Result<RootResult> {
    Ok(solve_detailed(sys, cfg)?.0)
}

/// [`solve`], also returning the reduction and multiplication matrices.
pub fn solve_detailed(sys: &PolySystem, cfg: &MethodConfig) -> Result<(RootResult, ReductionResult, MSMatrices)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let red = reduce(sys, cfg, &mut rng)?;
    let ms = build_ms(&red)?;
    let roots = sim_diag(&ms, &mut rng)?;
    let residuals = roots
        .iter()
        .map(|z| sys.residual(z))
        .collect::<Result<Vec<_>>>()?;
    let res = RootResult {
        roots,
        residuals,
        method: *cfg,
        seed: cfg.seed,
    };
    Ok((res, red, ms))
}

/// Reduction and multiplication matrices without root extraction, using the
/// same RNG stream as [`solve`].
pub fn multiplication_matrices(sys: &PolySystem, cfg: &MethodConfig) -> Result<(ReductionResult, MSMatrices)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let red = reduce(sys, cfg, &mut rng)?;
    let ms = build_ms(&red)?;
    Ok((red, ms))
}

/// Distance between two root multisets: the largest coordinate-wise
/// infinity-norm distance under a greedy nearest matching. Returns infinity
/// when the sizes differ.
pub fn multiset_distance(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let dist = |x: &[Complex64], y: &[Complex64]| {
        x.iter().zip(y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
    };
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, dist(x, y)))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

/// Multiset distance between two lists of scalars (greedy nearest match).
pub fn scalar_multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let wrap = |v: &[Complex64]| v.iter().map(|&z| vec![z]).collect::<Vec<_>>();
    multiset_distance(&wrap(a), &wrap(b))
}

/// Newton iterations from `z`; returns the polished point and the size of
/// the last correction. Used as an independent check on computed roots.
pub fn newton_polish(sys: &PolySystem, z: &[Complex64], iters: usize) -> Result<(Vec<Complex64>, f64)> {
    let mut x = nalgebra::DVector::from_column_slice(z);
    let mut last = f64::INFINITY;
    for _ in 0..iters {
        let f = nalgebra::DVector::from_vec(sys.eval(x.as_slice())?);
        let j = sys.jacobian(x.as_slice())?;
        let step = j
            .lu()
            .solve(&f)
            .ok_or(Error::SingularMatrix { index: 0 })?;
        x -= &step;
        last = step.norm();
        if last <= 1e-15 * x.norm().max(1.0) {
            break;
        }
    }
    Ok((x.iter().cloned().collect(), last))
}
