//! Reduction pipelines that turn a Macaulay matrix into the conversion
//! matrix `F`, which expresses every monomial of degree `<= d` in a basis
//! of the quotient algebra.
//!
//! Convention used throughout: if `x(z)` is the vector of monomial values at
//! a root `z` (in column order) and `b(z)` the basis values, then
//! `x(z) = F b(z)`. The low-degree block satisfies `x_low(z) = T b(z)` and
//! `b(z) = S x_low(z)`, where `S` is described by [`BasisTransform`].

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::CountContext;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::macaulay::{build_macaulay, extend_blocks, ColumnOrder, MacaulayMatrix};
use crate::poly::PolySystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    Direct,
    Nullspace,
    DegreeByDegree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factorization {
    Svd,
    Qrp,
    Lq,
}

impl std::fmt::Display for Pipeline {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Pipeline::Direct => "direct",
            Pipeline::Nullspace => "nullspace",
            Pipeline::DegreeByDegree => "dbd",
        })
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Factorization::Svd => "svd",
            Factorization::Qrp => "qrp",
            Factorization::Lq => "lq",
        })
    }
}

impl std::str::FromStr for Pipeline {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Pipeline::Direct),
            "nullspace" => Ok(Pipeline::Nullspace),
            "dbd" | "degree_by_degree" => Ok(Pipeline::DegreeByDegree),
            _ => Err(Error::InvalidInput(format!("unknown method '{s}'"))),
        }
    }
}

/// Parses a label such as `direct-svd`, `nullspace-qrp+rc` or `dbd-svd`.
impl std::str::FromStr for MethodConfig {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (body, rc) = match s.strip_suffix("+rc") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let (p, f) = body
            .split_once('-')
            .ok_or_else(|| Error::InvalidInput(format!("method label '{s}' must look like direct-svd")))?;
        let cfg = MethodConfig::new(p.parse()?, f.parse()?).with_random_combinations(rc);
        cfg.validate()?;
        Ok(cfg)
    }
}

impl std::str::FromStr for Factorization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svd" => Ok(Factorization::Svd),
            "qrp" => Ok(Factorization::Qrp),
            "lq" => Ok(Factorization::Lq),
            _ => Err(Error::InvalidInput(format!("unknown factorization '{s}'"))),
        }
    }
}

/// Which pipeline to run and how.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodConfig {
    pub pipeline: Pipeline,
    pub factorization: Factorization,
    pub random_combinations: bool,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for MethodConfig {
    fn default() -> Self {
        Self {
            pipeline: Pipeline::Direct,
            factorization: Factorization::Svd,
            random_combinations: false,
            seed: 0,
            tolerances: Tolerances::default(),
        }
    }
}

impl MethodConfig {
    pub fn new(pipeline: Pipeline, factorization: Factorization) -> Self {
        Self {
            pipeline,
            factorization,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_random_combinations(mut self, on: bool) -> Self {
        self.random_combinations = on;
        self
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tolerances = tol;
        self
    }

    /// Short label such as `direct-svd` or `nullspace-qrp+rc`.
    pub fn label(&self) -> String {
        let rc = if self.random_combinations { "+rc" } else { "" };
        format!("{}-{}{}", self.pipeline, self.factorization, rc)
    }

    fn validate(&self) -> Result<()> {
        if self.pipeline == Pipeline::DegreeByDegree && self.random_combinations {
            return Err(Error::InvalidInput(
                "random combinations cannot be combined with the degree-by-degree pipeline".into(),
            ));
        }
        Ok(())
    }
}

/// How basis values are recovered from low-degree monomial values.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisTransform {
    /// `T` with orthonormal columns (`V_{d-1} x r`); `b = T^H x_low`.
    Orthonormal(CMatrix),
    /// Basis of monomials, given as positions in the column order (all in
    /// the low-degree block); `b = x[positions]`.
    Monomial(Vec<usize>),
}

impl BasisTransform {
    /// Basis values from the full vector of monomial values.
    pub fn apply(&self, monomials: &nalgebra::DVector<Complex64>, cut: usize) -> nalgebra::DVector<Complex64> {
        match self {
            BasisTransform::Orthonormal(t) => {
                let low = monomials.rows(cut, monomials.len() - cut);
                t.adjoint() * low
            }
            BasisTransform::Monomial(sel) => {
                nalgebra::DVector::from_iterator(sel.len(), sel.iter().map(|&p| monomials[p]))
            }
        }
    }

    /// `S * X` where `X` has one row per low-degree monomial.
    pub fn left_apply(&self, x_low: &CMatrix, cut: usize) -> CMatrix {
        match self {
            BasisTransform::Orthonormal(t) => t.adjoint() * x_low,
            BasisTransform::Monomial(sel) => {
                let rows: Vec<usize> = sel.iter().map(|&p| p - cut).collect();
                x_low.select_rows(&rows)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReductionResult {
    /// `V_d x r` conversion matrix.
    pub f: CMatrix,
    pub basis: BasisTransform,
    pub r: usize,
    pub order: ColumnOrder,
}

impl ReductionResult {
    pub fn cut(&self) -> usize {
        self.order.cut()
    }
}

/// Verifies that singular values `s` of a matrix with `cols` columns are
/// consistent with a kernel of dimension exactly `nullity`.
fn check_nullity(s: &[f64], cols: usize, nullity: usize, tol: &Tolerances, what: &str) -> Result<()> {
    if nullity > cols {
        return Err(Error::Genericity(format!(
            "{what}: expected nullity {nullity} exceeds column count {cols}"
        )));
    }
    let rank = cols - nullity;
    if rank > s.len() {
        return Err(Error::Genericity(format!(
            "{what}: {} rows cannot reach rank {rank}",
            s.len()
        )));
    }
    let smax = s.first().copied().unwrap_or(0.0);
    if rank > 0 && s[rank - 1] <= tol.rank_deficiency_rel * smax {
        return Err(Error::Genericity(format!(
            "{what}: rank below {rank} (sigma_{rank} / sigma_1 = {:.3e}); nullity exceeds {nullity}",
            s[rank - 1] / smax
        )));
    }
    if rank < s.len() && s[rank] > tol.excess_rank_rel * smax {
        return Err(Error::Genericity(format!(
            "{what}: rank exceeds {rank} (sigma_{} / sigma_1 = {:.3e}); nullity below {nullity}",
            rank + 1,
            s[rank] / smax
        )));
    }
    Ok(())
}

/// Known-nullity kernel with a consistency check on the singular values.
fn checked_nullspace(a: &CMatrix, nullity: usize, tol: &Tolerances, what: &str) -> Result<CMatrix> {
    let (n, s) = linalg::nullspace_with_values(a, nullity)?;
    check_nullity(&s, a.ncols(), nullity, tol, what)?;
    Ok(n)
}

/// Premultiplies `Mac(d)` by a standard-normal `(V_d - r) x M_d` matrix.
pub fn random_combine<R: Rng + ?Sized>(mac: &MacaulayMatrix, r: usize, rng: &mut R) -> Result<CMatrix> {
    let rows = mac.ncols().checked_sub(r).ok_or_else(|| {
        Error::InvalidInput(format!("basis size {r} exceeds column count {}", mac.ncols()))
    })?;
    if rows > mac.nrows() {
        return Err(Error::Genericity(format!(
            "random combinations need {rows} rows but the Macaulay matrix has {}",
            mac.nrows()
        )));
    }
    let c = linalg::gaussian_matrix(rows, mac.nrows(), rng);
    Ok(c * &mac.data)
}

/// Direct reduction of a Macaulay-shaped matrix (any row count) whose
/// columns follow `order`.
pub fn direct_reduce_matrix(
    data: &CMatrix,
    order: &ColumnOrder,
    r: usize,
    fact: Factorization,
    tol: &Tolerances,
) -> Result<ReductionResult> {
    let cut = order.cut();
    let total = order.len();
    let low = total - cut;
    if data.ncols() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            actual: data.ncols(),
        });
    }
    if data.nrows() < cut {
        return Err(Error::Genericity(format!(
            "{} rows cannot eliminate {cut} degree-{} columns",
            data.nrows(),
            order.degree()
        )));
    }
    let mac1 = data.columns(0, cut).into_owned();
    let mac2 = data.columns(cut, low).into_owned();
    let (q, rfull) = linalg::qr_full(&mac1)?;
    let r_hat = rfull.view((0, 0), (cut, cut)).into_owned();
    let qm2 = q.adjoint() * mac2;
    let z = qm2.rows(0, cut).into_owned();
    let mac3 = qm2.rows(cut, data.nrows() - cut).into_owned();

    let k = low.checked_sub(r).ok_or_else(|| {
        Error::InvalidInput(format!("basis size {r} exceeds the {low} low-degree monomials"))
    })?;
    let (t, basis) = low_kernel(&mac3, k, cut, fact, tol)?;

    let x = linalg::triangular_solve(&r_hat, &(z * &t), true, tol.singular_pivot_rel)?;
    let mut f = CMatrix::zeros(total, r);
    f.rows_mut(0, cut).copy_from(&(-x));
    f.rows_mut(cut, low).copy_from(&t);
    Ok(ReductionResult {
        f,
        basis,
        r,
        order: order.clone(),
    })
}

/// Kernel representation of the reduced block `Mac3` whose rank must be
/// `k`: returns `T` (`low x r`) with `x_low = T b` and the matching basis
/// transform.
fn low_kernel(
    mac3: &CMatrix,
    k: usize,
    cut: usize,
    fact: Factorization,
    tol: &Tolerances,
) -> Result<(CMatrix, BasisTransform)> {
    let low = mac3.ncols();
    let r = low - k;
    if mac3.nrows() == 0 || low == 0 {
        if k > 0 {
            return Err(Error::Genericity(format!(
                "reduced block is empty but must have rank {k}"
            )));
        }
        let t = CMatrix::identity(low, low);
        return Ok((t.clone(), BasisTransform::Orthonormal(t)));
    }
    match fact {
        Factorization::Svd => {
            let (s, v) = linalg::svd_right(mac3)?;
            check_nullity(&s, low, r, tol, "reduced block")?;
            let t = v.columns(k, r).into_owned();
            Ok((t.clone(), BasisTransform::Orthonormal(t)))
        }
        Factorization::Qrp => {
            let f = linalg::qr_pivoted(mac3)?;
            check_nullity(&diag_abs(&f.r), low, r, tol, "reduced block")?;
            let r11 = f.r.view((0, 0), (k, k)).into_owned();
            let r12 = f.r.view((0, k), (k, r)).into_owned();
            let mut free: Vec<usize> = f.perm[k..].to_vec();
            free.sort_unstable();
            // Columns of R12 follow perm[k..]; reorder them to ascending position.
            let col_of: Vec<usize> = free
                .iter()
                .map(|c| f.perm[k..].iter().position(|p| p == c).unwrap())
                .collect();
            let r12 = r12.select_columns(&col_of);
            let piv = if k > 0 {
                -linalg::triangular_solve(&r11, &r12, true, tol.singular_pivot_rel)?
            } else {
                CMatrix::zeros(0, r)
            };
            let mut t = CMatrix::zeros(low, r);
            for (j, &c) in free.iter().enumerate() {
                t[(c, j)] = Complex64::new(1.0, 0.0);
            }
            for (i, &p) in f.perm[..k].iter().enumerate() {
                t.row_mut(p).copy_from(&piv.row(i));
            }
            let sel = free.iter().map(|&c| c + cut).collect();
            Ok((t, BasisTransform::Monomial(sel)))
        }
        Factorization::Lq => {
            // Row-pivoted LQ of Mac3, i.e. a pivoted QR of its adjoint: the
            // leading k columns of Q span the row space whatever the row order.
            let f = linalg::qr_pivoted(&mac3.adjoint())?;
            check_nullity(&diag_abs(&f.r), low, r, tol, "reduced block")?;
            let t = f.q.columns(k, r).into_owned();
            Ok((t.clone(), BasisTransform::Orthonormal(t)))
        }
    }
}

fn diag_abs(r: &CMatrix) -> Vec<f64> {
    (0..r.nrows().min(r.ncols())).map(|i| r[(i, i)].norm()).collect()
}

/// Direct Macaulay reduction.
pub fn direct_reduce(mac: &MacaulayMatrix, r: usize, cfg: &MethodConfig) -> Result<ReductionResult> {
    direct_reduce_matrix(&mac.data, &mac.order, r, cfg.factorization, &cfg.tolerances)
}

/// Null-space reduction from a basis `N` (`V_d x r`) of the kernel of the
/// Macaulay matrix.
pub fn nullspace_reduce(
    order: &ColumnOrder,
    n: &CMatrix,
    fact: Factorization,
    tol: &Tolerances,
) -> Result<ReductionResult> {
    let cut = order.cut();
    let total = order.len();
    let low = total - cut;
    let r = n.ncols();
    if n.nrows() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            actual: n.nrows(),
        });
    }
    if r > low {
        return Err(Error::Genericity(format!(
            "{r} basis elements cannot fit in {low} low-degree monomials"
        )));
    }
    // N2 = (rows of N for low-degree monomials)^H, an r x low matrix.
    let n2 = n.rows(cut, low).adjoint();
    let rank_err = |smin: f64, smax: f64| {
        Error::Genericity(format!(
            "low-degree restriction of the null space has rank below {r} (ratio {:.3e})",
            smin / smax
        ))
    };
    let (f, basis) = match fact {
        Factorization::Svd => {
            let dec = linalg::svd(&n2)?;
            let (smin, smax) = (dec.s[r - 1], dec.s[0]);
            if smin <= tol.rank_deficiency_rel * smax {
                return Err(rank_err(smin, smax));
            }
            let u = dec.u.columns(0, r);
            let sinv = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                r,
                dec.s.iter().take(r).map(|&s| Complex64::new(1.0 / s, 0.0)),
            ));
            let f = n * u * sinv;
            let t = dec.v.columns(0, r).into_owned();
            (f, BasisTransform::Orthonormal(t))
        }
        Factorization::Qrp => {
            let p = linalg::qr_pivoted(&n2)?;
            let d = diag_abs(&p.r);
            if d[r - 1] <= tol.rank_deficiency_rel * d[0] {
                return Err(rank_err(d[r - 1], d[0]));
            }
            // With N2[:, perm[..r]] = Q R11, the basis values x_low[perm[..r]]
            // equal R11^H Q^H c, so c = Q R11^{-H} b.
            let r11 = p.r.view((0, 0), (r, r)).into_owned();
            let rinv_h = linalg::triangular_solve(
                &r11.adjoint(),
                &CMatrix::identity(r, r),
                false,
                tol.singular_pivot_rel,
            )?;
            let f_perm = n * p.q.columns(0, r) * rinv_h;
            let mut sel: Vec<usize> = p.perm[..r].to_vec();
            sel.sort_unstable();
            let cols: Vec<usize> = sel
                .iter()
                .map(|c| p.perm.iter().position(|q| q == c).unwrap())
                .collect();
            let f = f_perm.select_columns(&cols);
            let sel = sel.iter().map(|&c| c + cut).collect();
            (f, BasisTransform::Monomial(sel))
        }
        Factorization::Lq => {
            let (qf, rf) = linalg::qr_thin(&n2.adjoint())?;
            let d = diag_abs(&rf);
            let dmax = d.iter().cloned().fold(0.0, f64::max);
            let dmin = d.iter().cloned().fold(f64::INFINITY, f64::min);
            if dmin <= tol.rank_deficiency_rel * dmax {
                return Err(rank_err(dmin, dmax));
            }
            let rinv = linalg::triangular_solve(&rf, &CMatrix::identity(r, r), true, tol.singular_pivot_rel)?;
            (n * rinv, BasisTransform::Orthonormal(qf))
        }
    };
    Ok(ReductionResult {
        f,
        basis,
        r,
        order: order.clone(),
    })
}

/// Kernel of `Mac(d)` (or its random combination) with nullity `r`.
pub fn macaulay_nullspace(data: &CMatrix, r: usize, tol: &Tolerances) -> Result<CMatrix> {
    checked_nullspace(data, r, tol, "Macaulay matrix")
}

/// Builds the null space of `Mac(d)` degree by degree, starting from the
/// kernel of `Mac(max beta)`.
pub fn dbd_nullspace(sys: &PolySystem, tol: &Tolerances) -> Result<(CMatrix, ColumnOrder)> {
    let ctx = CountContext::new(sys.degrees())?;
    let d = ctx.d();
    let k0 = ctx.max_degree();
    let mut mac = build_macaulay(sys, k0)?;
    let nullity = ctx.macaulay_nullity(k0 as i64) as usize;
    let mut n = checked_nullspace(&mac.data, nullity, tol, &format!("Mac({k0})"))?;
    for k in k0..d {
        let ext = extend_blocks(&mac, sys, d)?;
        let bn = &ext.b * &n;
        let new_cols = ext.a.ncols();
        let mut stacked = CMatrix::zeros(ext.a.nrows(), new_cols + bn.ncols());
        stacked.columns_mut(0, new_cols).copy_from(&ext.a);
        stacked.columns_mut(new_cols, bn.ncols()).copy_from(&bn);
        let next_nullity = ctx.macaulay_nullity(k as i64 + 1) as usize;
        let l = checked_nullspace(&stacked, next_nullity, tol, &format!("degree step {k}->{}", k + 1))?;
        let mut next = CMatrix::zeros(new_cols + n.nrows(), next_nullity);
        next.rows_mut(0, new_cols).copy_from(&l.rows(0, new_cols));
        next.rows_mut(new_cols, n.nrows())
            .copy_from(&(&n * l.rows(new_cols, n.ncols())));
        n = next;
        mac = ext.mac;
    }
    Ok((n, mac.order))
}

/// Runs the configured pipeline. `rng` is consumed only when random
/// combinations are enabled.
pub fn reduce<R: Rng + ?Sized>(sys: &PolySystem, cfg: &MethodConfig, rng: &mut R) -> Result<ReductionResult> {
    cfg.validate()?;
    let r = sys.bezout_count();
    let tol = &cfg.tolerances;
    if cfg.pipeline == Pipeline::DegreeByDegree {
        let (n, order) = dbd_nullspace(sys, tol)?;
        return nullspace_reduce(&order, &n, cfg.factorization, tol);
    }
    let mac = build_macaulay(sys, sys.macaulay_degree())?;
    let combined;
    let data: &CMatrix = if cfg.random_combinations {
        combined = random_combine(&mac, r, rng)?;
        &combined
    } else {
        &mac.data
    };
    match cfg.pipeline {
        Pipeline::Direct => direct_reduce_matrix(data, &mac.order, r, cfg.factorization, tol),
        Pipeline::Nullspace => {
            let n = macaulay_nullspace(data, r, tol)?;
            nullspace_reduce(&mac.order, &n, cfg.factorization, tol)
        }
        Pipeline::DegreeByDegree => unreachable!(),
    }
}
