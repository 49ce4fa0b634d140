//! Root and eigenvalue condition numbers, conditioning ratios, growth-rate
//! fits, and the sweep drivers built on them.

use num_complex::Complex64;
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::generators;
use crate::linalg::{self, CMatrix};
use crate::poly::PolySystem;
use crate::reduction::MethodConfig;
use crate::solver::{solve, solve_detailed};

/// `||Df(z)^{-1}||_2`, or infinity when the Jacobian is singular.
pub fn root_condition(sys: &PolySystem, z: &[Complex64]) -> Result<f64> {
    let j = sys.jacobian(z)?;
    let s = linalg::singular_values(&j)?;
    let smin = s.last().copied().unwrap_or(0.0);
    Ok(if smin > 0.0 { 1.0 / smin } else { f64::INFINITY })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigCondition {
    pub value: f64,
    /// Eigenvalue actually used (the one nearest the requested value).
    pub lambda: Complex64,
    /// Set when `|u^H v|` fell below the overlap threshold, i.e. the
    /// eigenvalue is numerically defective and `value` is only a lower
    /// bound in practice.
    pub flagged: bool,
}

/// `||u|| ||v|| / |u^H v|` for the eigenvalue of `m` nearest `lambda`.
pub fn eig_condition(m: &CMatrix, lambda: Complex64, tol: &Tolerances) -> Result<EigCondition> {
    let p = linalg::eig_pair(m, lambda)?;
    let overlap = p.left.dotc(&p.right).norm();
    let value = if overlap > 0.0 { 1.0 / overlap } else { f64::MAX };
    Ok(EigCondition {
        value: value.max(1.0),
        lambda: p.lambda,
        flagged: overlap < tol.eigvec_overlap_min,
    })
}

/// `eig_cond / root_cond`.
pub fn conditioning_ratio(eig_cond: f64, root_cond: f64) -> Result<f64> {
    if !(root_cond > 0.0) || !root_cond.is_finite() {
        return Err(Error::InvalidInput(format!(
            "root condition must be positive and finite, got {root_cond}"
        )));
    }
    Ok(eig_cond / root_cond)
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidInput(
            "growth-rate fit needs at least two distinct abscissae".into(),
        ));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Ok(sxy / sxx)
}

/// `g = 10^s - 1` with `s` the least-squares slope of `log10(cr)` vs `n`.
pub fn growth_rate(ns: &[f64], crs: &[f64]) -> Result<f64> {
    if crs.iter().any(|&c| !(c > 0.0) || !c.is_finite()) {
        return Err(Error::InvalidInput(
            "conditioning ratios must be positive and finite".into(),
        ));
    }
    let logs: Vec<f64> = crs.iter().map(|c| c.log10()).collect();
    Ok(10f64.powf(ols_slope(ns, &logs)?) - 1.0)
}

/// Median of a nonempty slice (mean of the middle pair for even length).
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len();
    if m == 0 {
        return f64::NAN;
    }
    if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

/// Seed for trial `idx` of a sweep started from `seed`.
pub fn trial_seed(seed: u64, idx: u64) -> u64 {
    seed ^ (idx + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// One measured root.
#[derive(Debug, Clone, Serialize)]
pub struct ConditioningRecord {
    pub n: usize,
    pub eps: f64,
    pub delta: f64,
    pub alpha: f64,
    pub k: usize,
    pub seed: u64,
    /// Zero-based coordinate whose multiplication matrix was used.
    pub coordinate: usize,
    pub root: Vec<Complex64>,
    pub lambda: Complex64,
    pub root_cond: f64,
    pub eig_cond: f64,
    pub cr: f64,
    pub flagged: bool,
}

pub const CSV_HEADER: &str = "n,eps,delta,alpha,k,seed,root_cond,eig_cond,cr";

impl ConditioningRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{:e},{:e},{:e},{},{},{:.17e},{:.17e},{:.17e}",
            self.n, self.eps, self.delta, self.alpha, self.k, self.seed, self.root_cond, self.eig_cond, self.cr
        )
    }
}

/// Family parameters copied into each record.
#[derive(Debug, Clone, Copy, Default)]
pub struct RecordMeta {
    pub eps: f64,
    pub delta: f64,
    pub alpha: f64,
    pub k: usize,
    pub seed: u64,
}

/// Solves `sys`, takes the computed root nearest `target`, and measures its
/// root condition and the condition of the matching eigenvalue of
/// `M_{x_coordinate}`.
pub fn measure_root(
    sys: &PolySystem,
    cfg: &MethodConfig,
    target: &[Complex64],
    coordinate: usize,
    meta: RecordMeta,
) -> Result<ConditioningRecord> {
    let n = sys.n();
    if coordinate >= n || target.len() != n {
        return Err(Error::InvalidInput("coordinate or target out of range".into()));
    }
    let (res, _, ms) = solve_detailed(sys, cfg)?;
    let root = res
        .roots
        .iter()
        .min_by(|a, b| dist(a, target).total_cmp(&dist(b, target)))
        .cloned()
        .ok_or_else(|| Error::InvalidInput("solver returned no roots".into()))?;
    let root_cond = root_condition(sys, &root)?;
    let ec = eig_condition(&ms.mats[coordinate], root[coordinate], &cfg.tolerances)?;
    Ok(ConditioningRecord {
        n,
        eps: meta.eps,
        delta: meta.delta,
        alpha: meta.alpha,
        k: meta.k,
        seed: meta.seed,
        coordinate,
        root,
        lambda: ec.lambda,
        root_cond,
        eig_cond: ec.value,
        cr: conditioning_ratio(ec.value, root_cond)?,
        flagged: ec.flagged,
    })
}

fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn origin(n: usize) -> Vec<Complex64> {
    vec![Complex64::new(0.0, 0.0); n]
}

/// Near-origin root of the devastating example for each `n`.
pub fn devastating_sweep(ns: &[usize], eps: f64, seed: u64, cfg: &MethodConfig) -> Result<Vec<ConditioningRecord>> {
    perturbed_sweep(ns, eps, 0.0, seed, cfg)
}

/// Near-origin root of the perturbed devastating example for each `n`.
pub fn perturbed_sweep(
    ns: &[usize],
    eps: f64,
    delta: f64,
    seed: u64,
    cfg: &MethodConfig,
) -> Result<Vec<ConditioningRecord>> {
    ns.iter()
        .map(|&n| {
            let sys = generators::perturbed_devastating(n, eps, delta, seed)?;
            let meta = RecordMeta {
                eps,
                delta,
                seed,
                ..RecordMeta::default()
            };
            measure_root(&sys, cfg, &origin(n), 0, meta)
        })
        .collect()
}

/// Primary root of a clustered conic system for each cluster size `k`.
pub fn cluster_sweep(
    n: usize,
    ks: &[usize],
    alpha: f64,
    seed: u64,
    cfg: &MethodConfig,
) -> Result<Vec<ConditioningRecord>> {
    ks.iter()
        .map(|&k| {
            let conic = generators::clustered_conic_random(n, k, alpha, seed)?;
            let target: Vec<Complex64> = conic.roots[0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
            let meta = RecordMeta {
                alpha,
                k,
                seed,
                ..RecordMeta::default()
            };
            measure_root(&conic.system, cfg, &target, 0, meta)
        })
        .collect()
}

/// Growth rate of the conditioning ratio over a set of records, using
/// `n` (or `k` when `by_k`) as the abscissa.
pub fn records_growth_rate(records: &[ConditioningRecord], by_k: bool) -> Result<f64> {
    let xs: Vec<f64> = records
        .iter()
        .map(|r| if by_k { r.k as f64 } else { r.n as f64 })
        .collect();
    let ys: Vec<f64> = records.iter().map(|r| r.cr).collect();
    growth_rate(&xs, &ys)
}

/// Fitted growth rates for each perturbation size, one per trial seed.
pub type GrowthRates = Vec<(f64, Vec<f64>)>;

/// Growth rates of the perturbed devastating family: for each `delta`, one
/// fitted rate per trial seed. Returns the records and `(delta, rates)`.
pub fn perturb_growth(
    ns: &[usize],
    eps: f64,
    deltas: &[f64],
    trials: usize,
    seed: u64,
    cfg: &MethodConfig,
) -> Result<(Vec<ConditioningRecord>, GrowthRates)> {
    if trials == 0 {
        return Err(Error::InvalidInput("at least one trial is required".into()));
    }
    let mut records = Vec::new();
    let mut rates = Vec::new();
    for &delta in deltas {
        let mut gs = Vec::with_capacity(trials);
        for t in 0..trials {
            let recs = perturbed_sweep(ns, eps, delta, trial_seed(seed, t as u64), cfg)?;
            gs.push(records_growth_rate(&recs, false)?);
            records.extend(recs);
        }
        rates.push((delta, gs));
    }
    Ok((records, rates))
}

/// Median root and eigenvalue condition per cluster size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusterSummary {
    pub k: usize,
    pub median_root_cond: f64,
    pub median_eig_cond: f64,
}

/// Clustered conic sweep over `trials` seeds, with per-`k` medians.
pub fn cluster_growth(
    n: usize,
    ks: &[usize],
    alpha: f64,
    trials: usize,
    seed: u64,
    cfg: &MethodConfig,
) -> Result<(Vec<ConditioningRecord>, Vec<ClusterSummary>)> {
    if trials == 0 {
        return Err(Error::InvalidInput("at least one trial is required".into()));
    }
    let mut records = Vec::new();
    for t in 0..trials {
        records.extend(cluster_sweep(n, ks, alpha, trial_seed(seed, t as u64), cfg)?);
    }
    let summary = ks
        .iter()
        .map(|&k| {
            let sel: Vec<&ConditioningRecord> = records.iter().filter(|r| r.k == k).collect();
            ClusterSummary {
                k,
                median_root_cond: median(&sel.iter().map(|r| r.root_cond).collect::<Vec<_>>()),
                median_eig_cond: median(&sel.iter().map(|r| r.eig_cond).collect::<Vec<_>>()),
            }
        })
        .collect();
    Ok((records, summary))
}

/// Median residual of one method in one dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodCompareRow {
    pub dim: usize,
    pub method: String,
    pub median_residual: f64,
    /// Systems the method rejected or failed on.
    pub failures: usize,
}

/// Solves `trials` random dense systems of the given degree in each
/// dimension with every method; the median is over all roots of all
/// successfully solved systems.
pub fn method_compare(
    dims: &[usize],
    degree: u32,
    trials: usize,
    seed: u64,
    methods: &[MethodConfig],
) -> Result<Vec<MethodCompareRow>> {
    let mut rows = Vec::new();
    for &n in dims {
        let systems = (0..trials)
            .map(|t| generators::random_dense(n, degree, trial_seed(seed, t as u64)))
            .collect::<Result<Vec<_>>>()?;
        for m in methods {
            let mut residuals = Vec::new();
            let mut failures = 0;
            for sys in &systems {
                match solve(sys, m) {
                    Ok(res) => residuals.extend(res.residuals),
                    Err(_) => failures += 1,
                }
            }
            rows.push(MethodCompareRow {
                dim: n,
                method: m.label(),
                median_residual: median(&residuals),
                failures,
            });
        }
    }
    Ok(rows)
}
