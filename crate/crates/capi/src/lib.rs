//! C ABI over `pcm-core`.
//!
//! Objects cross the boundary as opaque heap handles (`PcmMatrix`,
//! `PcmCompleted`, `PcmDag`) created by `*_new`/`*_parse` style functions and
//! released with the matching `*_free`. Every fallible function returns a
//! [`PcmStatus`]; on failure a description is available from
//! [`pcm_last_error_message`] on the same thread. Panics never unwind into C.
//!
//! Indices are 0-based. Matrices are row-major.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use pcm_core::completion::complete;
use pcm_core::inconsistency::{koczkodaj_ki, saaty_lambda_max};
use pcm_core::violation::check_ordinal_violation;
use pcm_core::{
    CompleteMatrix, CompletionMethod, ErrorCategory, IncompleteMatrix, PcmError, PreferenceDag,
    WeightVector, WeightingMethod,
};

/// Result of every fallible call. Values 2-4 match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Disconnected = 3,
    SolverFailure = 4,
    InvalidArgument = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Values accepted by [`pcm_complete`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcmCompletionMethod {
    Lex = 0,
    Gci = 1,
    Cr = 2,
}

/// Values accepted by [`pcm_weights`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcmWeightingMethod {
    Eigenvector = 0,
    LogLeastSquares = 1,
}

/// Incomplete (or complete) input matrix.
pub struct PcmMatrix(IncompleteMatrix);

/// Completed matrix.
pub struct PcmCompleted(CompleteMatrix);

/// Connected directed acyclic preference graph.
pub struct PcmDag(PreferenceDag);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

enum Failure {
    Status(PcmStatus, String),
    Pcm(PcmError),
}

impl From<PcmError> for Failure {
    fn from(e: PcmError) -> Self {
        Self::Pcm(e)
    }
}

fn fail(status: PcmStatus, msg: impl Into<String>) -> Failure {
    Failure::Status(status, msg.into())
}

/// Runs `body`, translating errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PcmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            PcmStatus::Ok
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Pcm(e))) => {
            set_error(e.to_string());
            match e.category() {
                ErrorCategory::Input => PcmStatus::InvalidInput,
                ErrorCategory::Disconnected => PcmStatus::Disconnected,
                ErrorCategory::Solver => PcmStatus::SolverFailure,
            }
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            PcmStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| fail(PcmStatus::NullPointer, format!("{what} is null")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(PcmStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, need: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if p.is_null() {
        return Err(fail(PcmStatus::NullPointer, format!("{what} is null")));
    }
    if len < need {
        return Err(fail(
            PcmStatus::BufferTooSmall,
            format!("{what} holds {len} values, need {need}"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(p, need))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(PcmStatus::NullPointer, "output handle pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(PcmStatus::NullPointer, "output pointer is null"));
    }
    *out = value;
    Ok(())
}

fn completion_method(m: u32) -> Result<CompletionMethod, Failure> {
    match m {
        0 => Ok(CompletionMethod::Lex),
        1 => Ok(CompletionMethod::Gci),
        2 => Ok(CompletionMethod::Cr),
        _ => Err(fail(PcmStatus::InvalidArgument, format!("unknown completion method {m}"))),
    }
}

fn weighting_method(m: u32) -> Result<WeightingMethod, Failure> {
    match m {
        0 => Ok(WeightingMethod::Em),
        1 => Ok(WeightingMethod::Llsm),
        _ => Err(fail(PcmStatus::InvalidArgument, format!("unknown weighting method {m}"))),
    }
}

/// Message describing the last failure on this thread; empty after a
/// success. Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pcm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a matrix in the text file format (NUL-terminated UTF-8).
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcm_matrix_parse(text: *const c_char, out: *mut *mut PcmMatrix) -> PcmStatus {
    guard(|| {
        if text.is_null() {
            return Err(fail(PcmStatus::NullPointer, "text is null"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| fail(PcmStatus::InvalidInput, "text is not valid UTF-8"))?;
        put(out, PcmMatrix(pcm_core::io::parse_matrix(s)?))
    })
}

/// Builds a matrix from `n * n` row-major `entries`; entry `k` is missing
/// when `known[k] == 0`. A null `known` means every entry is known.
///
/// # Safety
/// `entries` (and `known` if non-null) must point to `n * n` readable values.
#[no_mangle]
pub unsafe extern "C" fn pcm_matrix_new(
    n: usize,
    entries: *const f64,
    known: *const u8,
    out: *mut *mut PcmMatrix,
) -> PcmStatus {
    guard(|| {
        let len = n
            .checked_mul(n)
            .ok_or_else(|| fail(PcmStatus::InvalidArgument, "order overflows"))?;
        let values = slice(entries, len, "entries")?;
        let mask = if known.is_null() {
            None
        } else {
            Some(slice(known, len, "known")?)
        };
        let raw: Vec<Vec<Option<f64>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let k = i * n + j;
                        match mask {
                            Some(m) if m[k] == 0 => None,
                            _ => Some(values[k]),
                        }
                    })
                    .collect()
            })
            .collect();
        put(out, PcmMatrix(IncompleteMatrix::from_raw(&raw)?))
    })
}

/// Order of the matrix, 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pcm_matrix_order(m: *const PcmMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.n())
}

/// Number of missing pairs above the diagonal, 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pcm_matrix_missing_count(m: *const PcmMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.missing_pairs().len())
}

/// # Safety
/// `m` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pcm_matrix_free(m: *mut PcmMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Builds a DAG on `n` vertices from `n_arcs` pairs `(from, to)` stored
/// flat in `arcs`.
///
/// # Safety
/// `arcs` must point to `2 * n_arcs` readable values.
#[no_mangle]
pub unsafe extern "C" fn pcm_dag_new(
    n: usize,
    arcs: *const usize,
    n_arcs: usize,
    out: *mut *mut PcmDag,
) -> PcmStatus {
    guard(|| {
        let len = n_arcs
            .checked_mul(2)
            .ok_or_else(|| fail(PcmStatus::InvalidArgument, "arc count overflows"))?;
        let flat = slice(arcs, len, "arcs")?;
        let pairs = flat.chunks_exact(2).map(|c| (c[0], c[1]));
        put(out, PcmDag(PreferenceDag::new(n, pairs)?))
    })
}

/// Random connected DAG, reproducible from `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcm_dag_random(n: usize, density: f64, seed: u64, out: *mut *mut PcmDag) -> PcmStatus {
    guard(|| put(out, PcmDag(PreferenceDag::random(n, density, seed)?)))
}

/// Incomplete matrix with `alpha` on every arc and its reciprocal opposite.
///
/// # Safety
/// `dag` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcm_dag_to_matrix(dag: *const PcmDag, alpha: f64, out: *mut *mut PcmMatrix) -> PcmStatus {
    guard(|| {
        let dag = deref(dag, "dag")?;
        put(out, PcmMatrix(dag.0.to_incomplete_matrix(alpha)?))
    })
}

/// # Safety
/// `dag` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pcm_dag_free(dag: *mut PcmDag) {
    if !dag.is_null() {
        drop(Box::from_raw(dag));
    }
}

/// Completes `m` with a [`PcmCompletionMethod`] value.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcm_complete(m: *const PcmMatrix, method: u32, out: *mut *mut PcmCompleted) -> PcmStatus {
    guard(|| {
        let m = deref(m, "matrix")?;
        let method = completion_method(method)?;
        put(out, PcmCompleted(complete(&m.0, method)?.matrix))
    })
}

/// Order of the completed matrix, 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pcm_completed_order(c: *const PcmCompleted) -> usize {
    c.as_ref().map_or(0, |c| c.0.n())
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcm_completed_get(c: *const PcmCompleted, i: usize, j: usize, out: *mut f64) -> PcmStatus {
    guard(|| {
        let c = deref(c, "completed")?;
        let n = c.0.n();
        if i >= n || j >= n {
            return Err(fail(PcmStatus::InvalidArgument, format!("index ({i},{j}) out of range for order {n}")));
        }
        write(out, c.0.get(i, j))
    })
}

/// Copies all `n * n` entries row-major into `buf` of capacity `len`.
///
/// # Safety
/// `c` must be a live handle; `buf` must hold `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn pcm_completed_copy(c: *const PcmCompleted, buf: *mut f64, len: usize) -> PcmStatus {
    guard(|| {
        let c = deref(c, "completed")?;
        let src = c.0.as_slice();
        slice_mut(buf, len, src.len(), "buf")?.copy_from_slice(src);
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pcm_completed_free(c: *mut PcmCompleted) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Writes the `n` normalized weights from a [`PcmWeightingMethod`] value.
///
/// # Safety
/// `c` must be a live handle; `out` must hold `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn pcm_weights(c: *const PcmCompleted, method: u32, out: *mut f64, len: usize) -> PcmStatus {
    guard(|| {
        let c = deref(c, "completed")?;
        let method = weighting_method(method)?;
        let dst = slice_mut(out, len, c.0.n(), "out")?;
        dst.copy_from_slice(method.weights(&c.0)?.as_slice());
        Ok(())
    })
}

/// Counts the known comparisons of `m` contradicted by the weights `w`.
///
/// # Safety
/// `m` must be a live handle; `w` must hold `len` readable values.
#[no_mangle]
pub unsafe extern "C" fn pcm_check_violations(
    m: *const PcmMatrix,
    w: *const f64,
    len: usize,
    eq_tol: f64,
    out_count: *mut usize,
) -> PcmStatus {
    guard(|| {
        let m = deref(m, "matrix")?;
        let w = WeightVector::new(slice(w, len, "weights")?.to_vec())?;
        write(out_count, check_ordinal_violation(&m.0, &w, eq_tol)?.len())
    })
}

/// Koczkodaj inconsistency index of a completed matrix.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcm_koczkodaj_ki(c: *const PcmCompleted, out: *mut f64) -> PcmStatus {
    guard(|| write(out, koczkodaj_ki(&deref(c, "completed")?.0)?))
}

/// Principal eigenvalue of a completed matrix.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcm_lambda_max(c: *const PcmCompleted, out: *mut f64) -> PcmStatus {
    guard(|| write(out, saaty_lambda_max(&deref(c, "completed")?.0)?))
}

