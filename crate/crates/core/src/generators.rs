//! Reproducible test-system families: random dense systems, the devastating
//! example and its perturbations, and conic systems with clustered roots.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::macaulay::ColumnOrder;
use crate::poly::{Exponent, PolySystem, Polynomial};

/// Family name plus the parameters that family reads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorSpec {
    RandomDense { n: usize, degree: u32, seed: u64 },
    Devastating { n: usize, eps: f64, seed: u64 },
    PerturbedDevastating { n: usize, eps: f64, delta: f64, seed: u64 },
    ClusteredConic { n: usize, k: usize, alpha: f64, seed: u64 },
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<PolySystem> {
        match *self {
            GeneratorSpec::RandomDense { n, degree, seed } => random_dense(n, degree, seed),
            GeneratorSpec::Devastating { n, eps, seed } => devastating(n, eps, seed),
            GeneratorSpec::PerturbedDevastating { n, eps, delta, seed } => {
                perturbed_devastating(n, eps, delta, seed)
            }
            GeneratorSpec::ClusteredConic { n, k, alpha, seed } => {
                Ok(clustered_conic_random(n, k, alpha, seed)?.system)
            }
        }
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidInput("dimension must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// Every monomial of degree `<= beta` with an independent standard-normal
/// real coefficient.
pub fn random_dense(n: usize, beta: u32, seed: u64) -> Result<PolySystem> {
    check_n(n)?;
    if beta < 1 {
        return Err(Error::InvalidInput("degree must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = ColumnOrder::new(n, beta);
    let polys = (0..n)
        .map(|_| {
            let terms: Vec<(Exponent, Complex64)> = order
                .labels()
                .iter()
                .map(|e| (e.clone(), real(rng.sample(StandardNormal))))
                .collect();
            Polynomial::from_terms(n, terms)
        })
        .collect::<Result<Vec<_>>>()?;
    PolySystem::new(polys)
}

/// `p_i = x_i^2 + eps * sum_j Q_ij x_j` for a supplied orthogonal `Q`.
pub fn devastating_with_q(eps: f64, q: &DMatrix<f64>) -> Result<PolySystem> {
    let n = q.nrows();
    check_n(n)?;
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidInput(format!("eps must be positive, got {eps}")));
    }
    if q.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: q.ncols(),
        });
    }
    let orth_err = (q.transpose() * q - DMatrix::<f64>::identity(n, n)).norm();
    if orth_err > 1e-8 {
        return Err(Error::InvalidInput(format!(
            "Q is not orthogonal (||Q^T Q - I|| = {orth_err:.3e})"
        )));
    }
    let polys = (0..n)
        .map(|i| {
            let mut terms = vec![(Exponent::unit(n, i).shifted(i), real(1.0))];
            terms.extend((0..n).map(|j| (Exponent::unit(n, j), real(eps * q[(i, j)]))));
            Polynomial::from_terms(n, terms)
        })
        .collect::<Result<Vec<_>>>()?;
    PolySystem::new(polys)
}

/// Devastating example with a Haar-random `Q` drawn from `seed`.
pub fn devastating(n: usize, eps: f64, seed: u64) -> Result<PolySystem> {
    check_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = linalg::random_orthogonal(n, &mut rng);
    devastating_with_q(eps, &q)
}

/// Devastating example (same `Q` as [`devastating`] for the same seed) with
/// independent `N(0, delta^2)` noise added to the coefficient of every
/// monomial of degree `<= 2` in every polynomial.
pub fn perturbed_devastating(n: usize, eps: f64, delta: f64, seed: u64) -> Result<PolySystem> {
    check_n(n)?;
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::InvalidInput(format!("delta must be >= 0, got {delta}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = linalg::random_orthogonal(n, &mut rng);
    let base = devastating_with_q(eps, &q)?;
    if delta == 0.0 {
        return Ok(base);
    }
    let noise = Normal::new(0.0, delta).unwrap();
    let order = ColumnOrder::new(n, 2);
    let polys = base
        .polys()
        .iter()
        .map(|p| {
            let terms: Vec<(Exponent, Complex64)> = order
                .labels()
                .iter()
                .map(|e| (e.clone(), p.coefficient(e) + real(noise.sample(&mut rng))))
                .collect();
            Polynomial::from_terms(n, terms)
        })
        .collect::<Result<Vec<_>>>()?;
    PolySystem::new(polys)
}

/// A conic system together with the roots it was built to contain.
#[derive(Debug, Clone)]
pub struct ConicSystem {
    pub system: PolySystem,
    /// Prescribed common roots; the first is the primary root and the next
    /// `k - 1` are its perturbations.
    pub roots: Vec<Vec<f64>>,
    /// Center used for each polynomial (empty when the general quadric
    /// construction was used).
    pub centers: Vec<Vec<f64>>,
    /// Largest `|f_j(zeta_i)|` over polynomials and prescribed roots.
    pub max_residual: f64,
}

const CONIC_RETRIES: usize = 50;

/// Solves `sum_l a_l (r_il - c_l)^2 = 1` for the `n` coefficients `a`.
fn conic_coefficients(roots: &[Vec<f64>], c: &[f64]) -> Option<DVector<f64>> {
    let n = c.len();
    let a = DMatrix::from_fn(n, n, |i, l| (roots[i][l] - c[l]).powi(2));
    let sv = a.clone().svd(false, false).singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    if !(smin > 1e-14 * smax) {
        return None;
    }
    a.lu().solve(&DVector::from_element(n, 1.0))
}

fn conic_poly(a: &DVector<f64>, c: &[f64]) -> Result<Polynomial> {
    // 1 - sum_l a_l (x_l - c_l)^2
    let n = c.len();
    let mut terms = vec![(Exponent::zero(n), real(1.0))];
    for l in 0..n {
        terms.push((Exponent::unit(n, l).shifted(l), real(-a[l])));
        terms.push((Exponent::unit(n, l), real(2.0 * a[l] * c[l])));
        terms.push((Exponent::zero(n), real(-a[l] * c[l] * c[l])));
    }
    Polynomial::from_terms(n, terms)
}

/// Axis-aligned quadric `kappa + sum A_l x_l^2 + sum B_l x_l` through all
/// `roots` (`k <= 2n`), chosen as a random element of the solution space.
fn general_quadric<R: Rng + ?Sized>(roots: &[Vec<f64>], n: usize, rng: &mut R) -> Result<Polynomial> {
    let k = roots.len();
    let m = DMatrix::from_fn(k, 2 * n + 1, |i, col| {
        if col == 0 {
            1.0
        } else if col <= n {
            roots[i][col - 1].powi(2)
        } else {
            roots[i][col - n - 1]
        }
    });
    let kernel_dim = 2 * n + 1 - k;
    let ns = linalg::nullspace(&linalg::complexify(&m), kernel_dim)?;
    // The kernel of a real matrix is spanned by the real and imaginary parts
    // of any complex basis; extract a real orthonormal basis from them.
    let mut parts = DMatrix::<f64>::zeros(2 * n + 1, 2 * kernel_dim);
    parts.columns_mut(0, kernel_dim).copy_from(&ns.map(|z| z.re));
    parts.columns_mut(kernel_dim, kernel_dim).copy_from(&ns.map(|z| z.im));
    let basis = parts.svd(true, false).u.unwrap().columns(0, kernel_dim).into_owned();
    let w = DVector::from_fn(kernel_dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let v = basis * w;
    let scale = v.amax();
    let mut terms = vec![(Exponent::zero(n), real(v[0] / scale))];
    for l in 0..n {
        terms.push((Exponent::unit(n, l).shifted(l), real(v[1 + l] / scale)));
        terms.push((Exponent::unit(n, l), real(v[1 + n + l] / scale)));
    }
    Polynomial::from_terms(n, terms)
}

/// Conic system with `k` prescribed roots clustered around `primary`.
///
/// The roots `zeta_2..zeta_k` are `primary + N(0, alpha^2)` per coordinate.
/// For `k <= n` each polynomial is `1 - sum_l a_l (x_l - c_l)^2` with a
/// random center `c` in `[-1, 1]^n`, the square system for `a` being filled
/// with `n - k` extra random roots. For `n < k <= 2n` each polynomial is a
/// random axis-aligned quadric through all `k` roots.
pub fn clustered_conic(primary: &[f64], k: usize, alpha: f64, seed: u64) -> Result<ConicSystem> {
    let n = primary.len();
    check_n(n)?;
    if k < 1 || k > 2 * n {
        return Err(Error::InvalidInput(format!(
            "cluster size must satisfy 1 <= k <= 2n = {}, got {k}",
            2 * n
        )));
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidInput(format!("alpha must be >= 0, got {alpha}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, alpha.max(f64::MIN_POSITIVE)).unwrap();
    let unit = Uniform::new_inclusive(-1.0, 1.0);
    let mut roots = vec![primary.to_vec()];
    for _ in 1..k {
        roots.push(primary.iter().map(|&p| p + noise.sample(&mut rng)).collect());
    }
    if k > n {
        let polys = (0..n)
            .map(|_| general_quadric(&roots, n, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        return finish(PolySystem::new(polys)?, roots, Vec::new());
    }
    let mut full = roots.clone();
    for _ in k..n {
        full.push((0..n).map(|_| unit.sample(&mut rng)).collect());
    }
    let mut polys = Vec::with_capacity(n);
    let mut centers = Vec::with_capacity(n);
    for _ in 0..n {
        let mut found = None;
        for _ in 0..CONIC_RETRIES {
            let c: Vec<f64> = (0..n).map(|_| unit.sample(&mut rng)).collect();
            if let Some(a) = conic_coefficients(&full, &c) {
                found = Some((a, c));
                break;
            }
        }
        let (a, c) = found.ok_or_else(|| {
            Error::Genericity(format!(
                "no nonsingular center found after {CONIC_RETRIES} attempts"
            ))
        })?;
        polys.push(conic_poly(&a, &c)?);
        centers.push(c);
    }
    finish(PolySystem::new(polys)?, roots, centers)
}

fn finish(system: PolySystem, roots: Vec<Vec<f64>>, centers: Vec<Vec<f64>>) -> Result<ConicSystem> {
    let mut max_residual: f64 = 0.0;
    for z in &roots {
        let zc: Vec<Complex64> = z.iter().map(|&x| real(x)).collect();
        for v in system.eval(&zc)? {
            max_residual = max_residual.max(v.norm());
        }
    }
    Ok(ConicSystem {
        system,
        roots,
        centers,
        max_residual,
    })
}

/// [`clustered_conic`] with the primary root drawn uniformly from
/// `[-1, 1]^n` using the same seed stream.
pub fn clustered_conic_random(n: usize, k: usize, alpha: f64, seed: u64) -> Result<ConicSystem> {
    check_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let unit = Uniform::new_inclusive(-1.0, 1.0);
    let primary: Vec<f64> = (0..n).map(|_| unit.sample(&mut rng)).collect();
    clustered_conic(&primary, k, alpha, seed)
}
