//! Closed-form FLOP model for every pipeline, built from unit-constant
//! primitive costs and the exact counts of [`crate::combinatorics`].

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::combinatorics::{alpha, CountContext, RowCounts};
use crate::error::{Error, Result};

fn big(x: u128) -> BigUint {
    BigUint::from(x)
}

/// `QR(m, n) = m n^2`
pub fn qr_cost(m: u128, n: u128) -> BigUint {
    big(m) * big(n) * big(n)
}

/// `SVD(m, n) = m n min(m, n)`
pub fn svd_cost(m: u128, n: u128) -> BigUint {
    big(m) * big(n) * big(m.min(n))
}

/// `MatMult(m, n, k) = m n k`
pub fn matmult_cost(m: u128, n: u128, k: u128) -> BigUint {
    big(m) * big(n) * big(k)
}

/// `Backsolve(n, m) = m n^2` (triangular `n x n` against `n x m`).
pub fn backsolve_cost(n: u128, m: u128) -> BigUint {
    big(m) * big(n) * big(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CostMethod {
    DirectSvd,
    NullspaceSvd,
    DirectSvdRandom,
    NullspaceSvdRandom,
    DegreeByDegreeSvd,
}

impl CostMethod {
    pub const ALL: [CostMethod; 5] = [
        CostMethod::DirectSvd,
        CostMethod::NullspaceSvd,
        CostMethod::DirectSvdRandom,
        CostMethod::NullspaceSvdRandom,
        CostMethod::DegreeByDegreeSvd,
    ];
}

impl fmt::Display for CostMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CostMethod::DirectSvd => "direct-svd",
            CostMethod::NullspaceSvd => "nullspace-svd",
            CostMethod::DirectSvdRandom => "direct-svd+rc",
            CostMethod::NullspaceSvdRandom => "nullspace-svd+rc",
            CostMethod::DegreeByDegreeSvd => "dbd-svd",
        })
    }
}

/// Per-step and total FLOP counts for one `(n, beta, method)` triple.
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub n: usize,
    pub beta: u32,
    pub method: CostMethod,
    pub steps: Vec<(String, BigUint)>,
    pub total: BigUint,
}

impl CostReport {
    pub fn total_f64(&self) -> f64 {
        self.total.to_f64().unwrap_or(f64::INFINITY)
    }

    /// `self.total / other.total` in floating point.
    pub fn ratio_to(&self, other: &CostReport) -> f64 {
        self.total_f64() / other.total_f64()
    }
}

fn report(n: usize, beta: u32, method: CostMethod, steps: Vec<(String, BigUint)>) -> CostReport {
    let total = steps.iter().fold(BigUint::zero(), |acc, (_, c)| acc + c);
    CostReport {
        n,
        beta,
        method,
        steps,
        total,
    }
}

/// [`pipeline_cost_with`] using the row counts of the assembled matrices.
pub fn pipeline_cost(n: usize, beta: u32, method: CostMethod) -> Result<CostReport> {
    pipeline_cost_with(n, beta, method, RowCounts::MatrixShape)
}

/// FLOP model of one pipeline for `n` polynomials of degree `beta`.
pub fn pipeline_cost_with(n: usize, beta: u32, method: CostMethod, conv: RowCounts) -> Result<CostReport> {
    if n < 2 || beta < 2 {
        return Err(Error::InvalidInput(format!(
            "the cost model assumes n >= 2 and beta >= 2, got n = {n}, beta = {beta}"
        )));
    }
    let ctx = CountContext::uniform(n, beta)?;
    let d = ctx.d() as i64;
    let r = ctx.r();
    let vd = ctx.monomials_eq(d);
    let big_vd = ctx.monomials_leq(d);
    let vlow = ctx.monomials_leq(d - 1);
    let md = ctx.total_rows_with(d, conv);
    let reduced = big_vd - r;
    let s = |label: &str, c: BigUint| (label.to_string(), c);

    let direct = |rows: u128| {
        vec![
            s("QR of Mac1", qr_cost(rows, vd)),
            s("Q^H Mac2", matmult_cost(rows, rows, vlow)),
            s("SVD of Mac3", svd_cost(rows - vd, vlow)),
            s("Z V", matmult_cost(vd, vlow, r)),
            s("backsolve", backsolve_cost(vd, r)),
        ]
    };
    let nullspace_tail = || {
        vec![
            s("SVD of N2", svd_cost(r, vlow)),
            s("U^H N1", matmult_cost(r, r, vd)),
        ]
    };
    let combine = || s("random combination", matmult_cost(reduced, md, big_vd));

    let steps = match method {
        CostMethod::DirectSvd => direct(md),
        CostMethod::DirectSvdRandom => {
            let mut v = vec![combine()];
            v.extend(direct(reduced));
            v
        }
        CostMethod::NullspaceSvd => {
            let mut v = vec![s("SVD of Mac", svd_cost(md, big_vd))];
            v.extend(nullspace_tail());
            v
        }
        CostMethod::NullspaceSvdRandom => {
            let mut v = vec![combine(), s("SVD of combined Mac", svd_cost(reduced, big_vd))];
            v.extend(nullspace_tail());
            v
        }
        CostMethod::DegreeByDegreeSvd => {
            let b = beta as i64;
            let mut v = vec![s(
                "SVD of base Mac",
                svd_cost(ctx.total_rows_with(b, conv), ctx.monomials_leq(b)),
            )];
            for k in b..d {
                let (nk, nk1) = (ctx.macaulay_nullity(k), ctx.macaulay_nullity(k + 1));
                let tk1 = ctx.new_rows_with(k + 1, conv);
                let vk = ctx.monomials_leq(k);
                v.push(s(&format!("k={k}: B N"), matmult_cost(nk, vk, tk1)));
                v.push(s(
                    &format!("k={k}: kernel SVD"),
                    svd_cost(nk + ctx.monomials_eq(k + 1), tk1),
                ));
                v.push(s(&format!("k={k}: N update"), matmult_cost(nk1, nk, vk)));
            }
            v.extend(nullspace_tail());
            v
        }
    };
    Ok(report(n, beta, method, steps))
}

/// Cost of the degree-by-degree steps only, one entry per `k -> k+1`.
pub fn dbd_step_costs(n: usize, beta: u32, conv: RowCounts) -> Result<Vec<BigUint>> {
    let rep = pipeline_cost_with(n, beta, CostMethod::DegreeByDegreeSvd, conv)?;
    let per_k: Vec<BigUint> = rep.steps[1..rep.steps.len() - 2]
        .chunks(3)
        .map(|c| c.iter().fold(BigUint::zero(), |acc, (_, x)| acc + x))
        .collect();
    Ok(per_k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    FixedN,
    FixedBeta,
}

/// Growth expression (without constants) for a count or pipeline total.
///
/// Terms: `V_d-1`, `V_d`, `v_d`, `T_d`, `M_d`, `r`, `direct`, `nullspace`,
/// `random`, `dbd`.
pub fn asymptotic_bound(term: &str, regime: Regime, n: usize, beta: u32) -> Result<f64> {
    let (nf, b) = (n as f64, beta as f64);
    let a = if regime == Regime::FixedBeta { alpha(beta)? } else { 1.0 };
    let bn = b.powf(nf);
    let ban = bn * a.powf(nf);
    let v = match (term, regime) {
        ("V_d-1" | "V_d", Regime::FixedN) => bn,
        ("v_d", Regime::FixedN) => b.powf(nf - 1.0),
        ("T_d", Regime::FixedN) => bn,
        ("M_d", Regime::FixedN) => b.powf(nf + 1.0),
        ("r", _) => bn,
        ("direct", Regime::FixedN) => b.powf(3.0 * nf + 2.0),
        ("nullspace" | "random", Regime::FixedN) => b.powf(3.0 * nf + 1.0),
        ("dbd", Regime::FixedN) => b.powf(3.0 * nf),
        ("V_d-1" | "V_d" | "v_d", Regime::FixedBeta) => ban / nf.sqrt(),
        ("T_d" | "M_d", Regime::FixedBeta) => ban * nf.sqrt(),
        ("direct" | "nullspace", Regime::FixedBeta) => nf.sqrt() * ban.powi(3),
        ("random" | "dbd", Regime::FixedBeta) => ban.powi(3) / nf.sqrt(),
        _ => return Err(Error::InvalidInput(format!("unknown cost term '{term}'"))),
    };
    Ok(v)
}

/// One row of the simple-vs-degree-by-degree comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub dim: usize,
    pub degree: u32,
    pub simple: BigUint,
    pub dbd: BigUint,
    pub ratio: f64,
}

pub const COMPARISON_HEADER: &str = "dim,degree,simple_flops,dbd_flops,ratio";

impl ComparisonRow {
    pub fn csv_row(&self) -> String {
        format!("{},{},{},{},{:.6}", self.dim, self.degree, self.simple, self.dbd, self.ratio)
    }
}

/// Null-space pipeline cost without speedups against the degree-by-degree
/// pipeline, for every `(dim, degree)` pair.
pub fn emit_comparison(dims: &[usize], degrees: &[u32], conv: RowCounts) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::with_capacity(dims.len() * degrees.len());
    for &dim in dims {
        for &degree in degrees {
            let simple = pipeline_cost_with(dim, degree, CostMethod::NullspaceSvd, conv)?;
            let dbd = pipeline_cost_with(dim, degree, CostMethod::DegreeByDegreeSvd, conv)?;
            rows.push(ComparisonRow {
                dim,
                degree,
                ratio: simple.ratio_to(&dbd),
                simple: simple.total,
                dbd: dbd.total,
            });
        }
    }
    Ok(rows)
}

/// CSV text (header plus one line per row).
pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from(COMPARISON_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Degree at which the ratio peaks for `dim` (first on ties).
pub fn argmax_degree(rows: &[ComparisonRow], dim: usize) -> Option<u32> {
    rows.iter()
        .filter(|r| r.dim == dim)
        .fold(None::<&ComparisonRow>, |best, r| match best {
            Some(b) if b.ratio >= r.ratio => Some(b),
            _ => Some(r),
        })
        .map(|r| r.degree)
}
