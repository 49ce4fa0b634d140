//! Dense complex decompositions used by every reduction pipeline.
//!
//! Storage is `nalgebra::DMatrix<Complex64>` (column-major, so it can be
//! handed to LAPACK without copies of layout). Factorizations delegate to
//! the system LAPACK; this module only owns shapes, workspace handling and
//! the checks the pipelines rely on.

use std::ffi::{c_char, c_int};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::config::MACHINE_EPS;
use crate::error::{Error, Result};
use crate::lapack::{self, work_len};

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn check_info(routine: &'static str, info: c_int) -> Result<()> {
    if info != 0 {
        Err(Error::Backend { routine, info })
    } else {
        Ok(())
    }
}

fn to_int(x: usize) -> c_int {
    c_int::try_from(x).expect("matrix dimension exceeds LAPACK integer range")
}

/// Conjugate transpose.
pub fn adjoint(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

/// Frobenius norm.
pub fn fro(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Promotes a real matrix to complex.
pub fn complexify(a: &DMatrix<f64>) -> CMatrix {
    a.map(|x| Complex64::new(x, 0.0))
}

/// Householder factors of `A` (the `zgeqrf` output).
struct Householder {
    packed: CMatrix,
    tau: Vec<Complex64>,
}

fn geqrf(a: &CMatrix) -> Result<Householder> {
    let (m, n) = a.shape();
    let mut packed = a.clone();
    let k = m.min(n);
    let mut tau = vec![ZERO; k.max(1)];
    let (mi, ni, lda) = (to_int(m), to_int(n), to_int(m.max(1)));
    let mut info = 0;
    let mut query = ZERO;
    let lwork = -1;
    unsafe {
        lapack::zgeqrf_(&mi, &ni, packed.as_mut_ptr(), &lda, tau.as_mut_ptr(), &mut query, &lwork, &mut info);
    }
    check_info("zgeqrf", info)?;
    let lwork = work_len(query);
    let mut work = vec![ZERO; lwork];
    let lw = to_int(lwork);
    unsafe {
        lapack::zgeqrf_(&mi, &ni, packed.as_mut_ptr(), &lda, tau.as_mut_ptr(), work.as_mut_ptr(), &lw, &mut info);
    }
    check_info("zgeqrf", info)?;
    Ok(Householder { packed, tau })
}

/// Forms the first `cols` columns of the unitary factor from reflectors.
fn ungqr(h: &Householder, cols: usize) -> Result<CMatrix> {
    let m = h.packed.nrows();
    let k = h.packed.ncols().min(m);
    let mut q = CMatrix::zeros(m, cols);
    let copy = k.min(cols);
    q.columns_mut(0, copy).copy_from(&h.packed.columns(0, copy));
    if m == 0 || cols == 0 {
        return Ok(q);
    }
    let kk = k.min(cols);
    let (mi, ci, ki, lda) = (to_int(m), to_int(cols), to_int(kk), to_int(m));
    let mut info = 0;
    let mut query = ZERO;
    let lwork = -1;
    unsafe {
        lapack::zungqr_(&mi, &ci, &ki, q.as_mut_ptr(), &lda, h.tau.as_ptr(), &mut query, &lwork, &mut info);
    }
    check_info("zungqr", info)?;
    let lwork = work_len(query);
    let mut work = vec![ZERO; lwork];
    let lw = to_int(lwork);
    unsafe {
        lapack::zungqr_(&mi, &ci, &ki, q.as_mut_ptr(), &lda, h.tau.as_ptr(), work.as_mut_ptr(), &lw, &mut info);
    }
    check_info("zungqr", info)?;
    Ok(q)
}

fn upper_part(packed: &CMatrix, rows: usize) -> CMatrix {
    let n = packed.ncols();
    CMatrix::from_fn(rows, n, |i, j| {
        if i <= j && i < packed.nrows() {
            packed[(i, j)]
        } else {
            ZERO
        }
    })
}

fn require_nonempty(a: &CMatrix) -> Result<()> {
    if a.nrows() == 0 || a.ncols() == 0 {
        Err(Error::InvalidInput(format!(
            "factorization of an empty {}x{} matrix",
            a.nrows(),
            a.ncols()
        )))
    } else {
        Ok(())
    }
}

/// Thin QR: `A = Q R` with `Q` of size `m x k`, `R` of size `k x n`,
/// `k = min(m, n)`.
pub fn qr_thin(a: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    require_nonempty(a)?;
    let k = a.nrows().min(a.ncols());
    let h = geqrf(a)?;
    Ok((ungqr(&h, k)?, upper_part(&h.packed, k)))
}

/// Full QR: `Q` is `m x m` unitary and `R` is `m x n` upper trapezoidal.
pub fn qr_full(a: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    require_nonempty(a)?;
    let m = a.nrows();
    let h = geqrf(a)?;
    Ok((ungqr(&h, m)?, upper_part(&h.packed, m)))
}

/// Column-pivoted QR factors: `A[:, perm] = Q R`.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    /// `m x m` unitary.
    pub q: CMatrix,
    /// `m x n` upper trapezoidal with nonincreasing `|R_jj|`.
    pub r: CMatrix,
    /// `perm[j]` is the original index of the `j`-th factored column.
    pub perm: Vec<usize>,
}

/// QR with column pivoting (`zgeqp3`).
pub fn qr_pivoted(a: &CMatrix) -> Result<PivotedQr> {
    require_nonempty(a)?;
    let (m, n) = a.shape();
    let mut packed = a.clone();
    let k = m.min(n);
    let mut tau = vec![ZERO; k.max(1)];
    let mut jpvt = vec![0 as c_int; n];
    let mut rwork = vec![0.0; 2 * n];
    let (mi, ni, lda) = (to_int(m), to_int(n), to_int(m));
    let mut info = 0;
    let mut query = ZERO;
    let lwork = -1;
    unsafe {
        lapack::zgeqp3_(&mi, &ni, packed.as_mut_ptr(), &lda, jpvt.as_mut_ptr(), tau.as_mut_ptr(), &mut query, &lwork, rwork.as_mut_ptr(), &mut info);
    }
    check_info("zgeqp3", info)?;
    let lwork = work_len(query);
    let mut work = vec![ZERO; lwork];
    let lw = to_int(lwork);
    unsafe {
        lapack::zgeqp3_(&mi, &ni, packed.as_mut_ptr(), &lda, jpvt.as_mut_ptr(), tau.as_mut_ptr(), work.as_mut_ptr(), &lw, rwork.as_mut_ptr(), &mut info);
    }
    check_info("zgeqp3", info)?;
    let h = Householder { packed, tau };
    Ok(PivotedQr {
        q: ungqr(&h, m)?,
        r: upper_part(&h.packed, m),
        perm: jpvt.iter().map(|&p| p as usize - 1).collect(),
    })
}

/// LQ factorization `A = L Q` computed as the QR factorization of `A^H`.
/// `L` is `m x n` lower trapezoidal and `Q` is `n x n` unitary.
pub fn lq(a: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let (q, r) = qr_full(&a.adjoint())?;
    Ok((r.adjoint(), q.adjoint()))
}

/// Full singular value decomposition `A = U diag(s) V^H`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `m x m` unitary.
    pub u: CMatrix,
    /// `min(m, n)` singular values, nonincreasing.
    pub s: Vec<f64>,
    /// `n x n` unitary (not its adjoint).
    pub v: CMatrix,
}

/// Runs `zgesvd`, forming the full `U` and `V^H` only when `vectors` is set.
fn gesvd(a: &CMatrix, vectors: bool) -> Result<(Option<CMatrix>, Vec<f64>, Option<CMatrix>)> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok((
            vectors.then(|| CMatrix::identity(m, m)),
            Vec::new(),
            vectors.then(|| CMatrix::identity(n, n)),
        ));
    }
    let mut work_a = a.clone();
    let k = m.min(n);
    let mut s = vec![0.0; k];
    // LAPACK wants a leading dimension of at least 1 for unreferenced outputs.
    let (um, vn) = if vectors { (m, n) } else { (1, 1) };
    let mut u = CMatrix::zeros(um, um);
    let mut vt = CMatrix::zeros(vn, vn);
    let job = (if vectors { b'A' } else { b'N' }) as c_char;
    let ldu = to_int(u.nrows());
    let ldvt = to_int(vt.nrows());
    let mut rwork = vec![0.0; 5 * k];
    let (mi, ni) = (to_int(m), to_int(n));
    let mut info = 0;
    let mut query = ZERO;
    let lwork = -1;
    unsafe {
        lapack::zgesvd_(&job, &job, &mi, &ni, work_a.as_mut_ptr(), &mi, s.as_mut_ptr(), u.as_mut_ptr(), &ldu, vt.as_mut_ptr(), &ldvt, &mut query, &lwork, rwork.as_mut_ptr(), &mut info);
    }
    check_info("zgesvd", info)?;
    let lwork = work_len(query);
    let mut work = vec![ZERO; lwork];
    let lw = to_int(lwork);
    unsafe {
        lapack::zgesvd_(&job, &job, &mi, &ni, work_a.as_mut_ptr(), &mi, s.as_mut_ptr(), u.as_mut_ptr(), &ldu, vt.as_mut_ptr(), &ldvt, work.as_mut_ptr(), &lw, rwork.as_mut_ptr(), &mut info);
    }
    check_info("zgesvd", info)?;
    Ok((vectors.then_some(u), s, vectors.then(|| vt.adjoint())))
}

/// Full SVD via `zgesvd` (Householder bidiagonalization followed by
/// implicit-shift QR on the bidiagonal).
pub fn svd(a: &CMatrix) -> Result<Svd> {
    let (u, s, v) = gesvd(a, true)?;
    Ok(Svd {
        u: u.expect("requested"),
        s,
        v: v.expect("requested"),
    })
}

/// Singular values and all right singular vectors via the divide-and-conquer
/// driver `zgesdd`. `U` is only kept in `A`'s storage (or formed when it is
/// the smaller factor), which is much cheaper than `zgesvd` on tall matrices.
pub fn svd_right(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok((Vec::new(), CMatrix::identity(n, n)));
    }
    let mut work_a = a.clone();
    let (mn, mx) = (m.min(n), m.max(n));
    let mut s = vec![0.0; mn];
    let tall = m >= n;
    let jobz = (if tall { b'O' } else { b'A' }) as c_char;
    let mut u = if tall { CMatrix::zeros(1, 1) } else { CMatrix::zeros(m, m) };
    let mut vt = CMatrix::zeros(n, n);
    let ldu = to_int(u.nrows());
    let ldvt = to_int(n);
    let mut rwork = vec![0.0; (5 * mn * mn + 5 * mn).max(2 * mx * mn + 2 * mn * mn + mn)];
    let mut iwork = vec![0 as c_int; 8 * mn];
    let (mi, ni) = (to_int(m), to_int(n));
    let mut info = 0;
    let mut query = ZERO;
    let lwork = -1;
    unsafe {
        lapack::zgesdd_(&jobz, &mi, &ni, work_a.as_mut_ptr(), &mi, s.as_mut_ptr(), u.as_mut_ptr(), &ldu, vt.as_mut_ptr(), &ldvt, &mut query, &lwork, rwork.as_mut_ptr(), iwork.as_mut_ptr(), &mut info);
    }
    check_info("zgesdd", info)?;
    let lwork = work_len(query);
    let mut work = vec![ZERO; lwork];
    let lw = to_int(lwork);
    unsafe {
        lapack::zgesdd_(&jobz, &mi, &ni, work_a.as_mut_ptr(), &mi, s.as_mut_ptr(), u.as_mut_ptr(), &ldu, vt.as_mut_ptr(), &ldvt, work.as_mut_ptr(), &lw, rwork.as_mut_ptr(), iwork.as_mut_ptr(), &mut info);
    }
    check_info("zgesdd", info)?;
    Ok((s, vt.adjoint()))
}

/// Singular values only.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(gesvd(a, false)?.1)
}

/// Number of singular values above `rel_tol * s_max`.
pub fn numeric_rank(s: &[f64], rel_tol: f64) -> usize {
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * smax).count()
}

/// Orthonormal basis of a null space whose dimension `k` is known in
/// advance: the last `k` right singular vectors.
pub fn nullspace(a: &CMatrix, k: usize) -> Result<CMatrix> {
    Ok(nullspace_with_values(a, k)?.0)
}

/// As [`nullspace`], also returning the singular values.
pub fn nullspace_with_values(a: &CMatrix, k: usize) -> Result<(CMatrix, Vec<f64>)> {
    let n = a.ncols();
    if k > n {
        return Err(Error::InvalidInput(format!(
            "requested null space of dimension {k} for a matrix with {n} columns"
        )));
    }
    let (s, v) = svd_right(a)?;
    Ok((v.columns(n - k, k).into_owned(), s))
}

/// Schur form `A = U T U^H` with `T` upper triangular.
pub fn schur(a: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let n = square_dim(a)?;
    let mut t = a.clone();
    let mut u = CMatrix::zeros(n, n);
    let mut w = vec![ZERO; n];
    let mut rwork = vec![0.0; n];
    let mut bwork = vec![0 as c_int; n];
    let (jobvs, sort) = (b'V' as c_char, b'N' as c_char);
    let ni = to_int(n);
    let mut sdim = 0;
    let mut info = 0;
    let mut query = ZERO;
    let lwork = -1;
    unsafe {
        lapack::zgees_(&jobvs, &sort, None, &ni, t.as_mut_ptr(), &ni, &mut sdim, w.as_mut_ptr(), u.as_mut_ptr(), &ni, &mut query, &lwork, rwork.as_mut_ptr(), bwork.as_mut_ptr(), &mut info);
    }
    check_info("zgees", info)?;
    let lwork = work_len(query);
    let mut work = vec![ZERO; lwork];
    let lw = to_int(lwork);
    unsafe {
        lapack::zgees_(&jobvs, &sort, None, &ni, t.as_mut_ptr(), &ni, &mut sdim, w.as_mut_ptr(), u.as_mut_ptr(), &ni, work.as_mut_ptr(), &lw, rwork.as_mut_ptr(), bwork.as_mut_ptr(), &mut info);
    }
    check_info("zgees", info)?;
    // zgees leaves rounding noise below the diagonal untouched; clear it.
    for j in 0..n {
        for i in (j + 1)..n {
            t[(i, j)] = ZERO;
        }
    }
    Ok((u, t))
}

fn square_dim(a: &CMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidInput(format!(
            "expected a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.nrows() == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    Ok(a.nrows())
}

struct Eig {
    values: Vec<Complex64>,
    left: Option<CMatrix>,
    right: Option<CMatrix>,
}

fn geev(a: &CMatrix, vectors: bool) -> Result<Eig> {
    let n = square_dim(a)?;
    let mut work_a = a.clone();
    let mut w = vec![ZERO; n];
    let ld = if vectors { n } else { 1 };
    let mut vl = CMatrix::zeros(ld, ld);
    let mut vr = CMatrix::zeros(ld, ld);
    let mut rwork = vec![0.0; 2 * n];
    let job = if vectors { b'V' } else { b'N' } as c_char;
    let (ni, ldi) = (to_int(n), to_int(ld));
    let mut info = 0;
    let mut query = ZERO;
    let lwork = -1;
    unsafe {
        lapack::zgeev_(&job, &job, &ni, work_a.as_mut_ptr(), &ni, w.as_mut_ptr(), vl.as_mut_ptr(), &ldi, vr.as_mut_ptr(), &ldi, &mut query, &lwork, rwork.as_mut_ptr(), &mut info);
    }
    check_info("zgeev", info)?;
    let lwork = work_len(query);
    let mut work = vec![ZERO; lwork];
    let lw = to_int(lwork);
    unsafe {
        lapack::zgeev_(&job, &job, &ni, work_a.as_mut_ptr(), &ni, w.as_mut_ptr(), vl.as_mut_ptr(), &ldi, vr.as_mut_ptr(), &ldi, work.as_mut_ptr(), &lw, rwork.as_mut_ptr(), &mut info);
    }
    check_info("zgeev", info)?;
    Ok(Eig {
        values: w,
        left: vectors.then_some(vl),
        right: vectors.then_some(vr),
    })
}

/// Eigenvalues by the standard Hessenberg QR iteration.
pub fn eigvals(a: &CMatrix) -> Result<Vec<Complex64>> {
    Ok(geev(a, false)?.values)
}

/// An eigenvalue with unit-norm left (`u^H A = lambda u^H`) and right
/// (`A v = lambda v`) eigenvectors.
#[derive(Debug, Clone)]
pub struct EigPair {
    pub lambda: Complex64,
    pub left: nalgebra::DVector<Complex64>,
    pub right: nalgebra::DVector<Complex64>,
}

/// Left and right eigenvectors of the eigenvalue of `A` nearest `target`.
pub fn eig_pair(a: &CMatrix, target: Complex64) -> Result<EigPair> {
    let eig = geev(a, true)?;
    let idx = eig
        .values
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| (*x - target).norm().total_cmp(&(*y - target).norm()))
        .map(|(i, _)| i)
        .unwrap();
    let mut left = eig.left.unwrap().column(idx).into_owned();
    let mut right = eig.right.unwrap().column(idx).into_owned();
    left /= Complex64::new(left.norm(), 0.0);
    right /= Complex64::new(right.norm(), 0.0);
    Ok(EigPair {
        lambda: eig.values[idx],
        left,
        right,
    })
}

/// Solves `T X = B` for triangular `T`.
///
/// Fails with [`Error::SingularMatrix`] when some `|T_jj|` is below
/// `pivot_rel * max|T_ij|`.
pub fn triangular_solve(t: &CMatrix, b: &CMatrix, upper: bool, pivot_rel: f64) -> Result<CMatrix> {
    let n = square_dim(t)?;
    if b.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: b.nrows(),
        });
    }
    let tmax = t.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for j in 0..n {
        if t[(j, j)].norm() <= pivot_rel * tmax {
            return Err(Error::SingularMatrix { index: j });
        }
    }
    let mut x = b.clone();
    if b.ncols() == 0 {
        return Ok(x);
    }
    let uplo = if upper { b'U' } else { b'L' } as c_char;
    let (trans, diag) = (b'N' as c_char, b'N' as c_char);
    let (ni, nrhs) = (to_int(n), to_int(b.ncols()));
    let mut info = 0;
    unsafe {
        lapack::ztrtrs_(&uplo, &trans, &diag, &ni, &nrhs, t.as_ptr(), &ni, x.as_mut_ptr(), &ni, &mut info);
    }
    if info > 0 {
        return Err(Error::SingularMatrix {
            index: info as usize - 1,
        });
    }
    check_info("ztrtrs", info)?;
    Ok(x)
}

/// Solves `R X = B` for upper-triangular `R`, rejecting diagonal entries
/// below machine precision relative to `max|R|`.
pub fn back_substitute(r: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    triangular_solve(r, b, true, MACHINE_EPS)
}

/// Haar-distributed real orthogonal matrix: QR of a standard Gaussian
/// matrix with the signs of `diag(R)` absorbed into `Q`.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Standard Gaussian real matrix promoted to complex.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), 0.0)
    })
}

/// Largest principal angle (radians) between the column spaces of two
/// matrices with orthonormal columns.
pub fn max_principal_angle(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.ncols() != b.ncols() || a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.ncols(),
            actual: b.ncols(),
        });
    }
    let (qa, _) = qr_thin(a)?;
    let (qb, _) = qr_thin(b)?;
    // sin of the largest angle is the norm of the part of qb outside span(qa).
    let resid = &qb - &qa * (qa.adjoint() * &qb);
    let s = singular_values(&resid)?;
    Ok(s.first().copied().unwrap_or(0.0).min(1.0).asin())
}
