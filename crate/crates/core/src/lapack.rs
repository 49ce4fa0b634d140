//! Raw bindings to the complex double LAPACK routines we need, resolved
//! against the system OpenBLAS (LP64).

#![allow(clippy::too_many_arguments)]

use std::ffi::{c_char, c_int};

use num_complex::Complex64;

pub type Select1 = Option<unsafe extern "C" fn(*const Complex64) -> c_int>;

#[link(name = "openblas")]
extern "C" {
    pub fn zgeqrf_(
        m: *const c_int,
        n: *const c_int,
        a: *mut Complex64,
        lda: *const c_int,
        tau: *mut Complex64,
        work: *mut Complex64,
        lwork: *const c_int,
        info: *mut c_int,
    );

    pub fn zungqr_(
        m: *const c_int,
        n: *const c_int,
        k: *const c_int,
        a: *mut Complex64,
        lda: *const c_int,
        tau: *const Complex64,
        work: *mut Complex64,
        lwork: *const c_int,
        info: *mut c_int,
    );

    pub fn zgeqp3_(
        m: *const c_int,
        n: *const c_int,
        a: *mut Complex64,
        lda: *const c_int,
        jpvt: *mut c_int,
        tau: *mut Complex64,
        work: *mut Complex64,
        lwork: *const c_int,
        rwork: *mut f64,
        info: *mut c_int,
    );

    pub fn zgesdd_(
        jobz: *const c_char,
        m: *const c_int,
        n: *const c_int,
        a: *mut Complex64,
        lda: *const c_int,
        s: *mut f64,
        u: *mut Complex64,
        ldu: *const c_int,
        vt: *mut Complex64,
        ldvt: *const c_int,
        work: *mut Complex64,
        lwork: *const c_int,
        rwork: *mut f64,
        iwork: *mut c_int,
        info: *mut c_int,
    );

    pub fn zgesvd_(
        jobu: *const c_char,
        jobvt: *const c_char,
        m: *const c_int,
        n: *const c_int,
        a: *mut Complex64,
        lda: *const c_int,
        s: *mut f64,
        u: *mut Complex64,
        ldu: *const c_int,
        vt: *mut Complex64,
        ldvt: *const c_int,
        work: *mut Complex64,
        lwork: *const c_int,
        rwork: *mut f64,
        info: *mut c_int,
    );

    pub fn zgees_(
        jobvs: *const c_char,
        sort: *const c_char,
        select: Select1,
        n: *const c_int,
        a: *mut Complex64,
        lda: *const c_int,
        sdim: *mut c_int,
        w: *mut Complex64,
        vs: *mut Complex64,
        ldvs: *const c_int,
        work: *mut Complex64,
        lwork: *const c_int,
        rwork: *mut f64,
        bwork: *mut c_int,
        info: *mut c_int,
    );

    pub fn zgeev_(
        jobvl: *const c_char,
        jobvr: *const c_char,
        n: *const c_int,
        a: *mut Complex64,
        lda: *const c_int,
        w: *mut Complex64,
        vl: *mut Complex64,
        ldvl: *const c_int,
        vr: *mut Complex64,
        ldvr: *const c_int,
        work: *mut Complex64,
        lwork: *const c_int,
        rwork: *mut f64,
        info: *mut c_int,
    );

    pub fn ztrtrs_(
        uplo: *const c_char,
        trans: *const c_char,
        diag: *const c_char,
        n: *const c_int,
        nrhs: *const c_int,
        a: *const Complex64,
        lda: *const c_int,
        b: *mut Complex64,
        ldb: *const c_int,
        info: *mut c_int,
    );
}

/// Converts a workspace-query result into a buffer length.
pub fn work_len(query: Complex64) -> usize {
    (query.re as usize).max(1)
}
