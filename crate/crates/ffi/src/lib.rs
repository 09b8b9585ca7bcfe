//! C ABI for `lipext`.
//!
//! Operators are exposed as opaque `LipextOperator` handles created by the
//! `lipext_operator_build_*` / `lipext_operator_load_*` functions and released
//! with `lipext_operator_free`. Every fallible call returns a `LipextStatus`;
//! on failure `lipext_last_error` gives a message for the calling thread.
//!
//! Matrices are passed as row-major `double` buffers with explicit shapes.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lipext::gauss::{default_samples, max_square_bound};
use lipext::jl_ext::{self, AnchorSet, JLOperator, JlError};
use lipext::metric::{self, FiniteMetric, MetricError, QuerySet};
use lipext::RowMatrix;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LipextStatus {
    Ok = 0,
    NullPointer = 1,
    /// Invalid input: bad shapes, invalid metric, mismatched anchors.
    InvalidInput = 2,
    /// Rank-deficient embedding or least-squares failure.
    Numerical = 3,
    Io = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

/// Certificate for a built operator.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LipextCertificate {
    pub rms_sample_lip: f64,
    pub s_min: f64,
    /// Certified Lipschitz bound, `rms_sample_lip / s_min`.
    pub bound: f64,
    pub theory_reference: f64,
}

/// Opaque operator handle.
pub struct LipextOperator {
    op: JLOperator,
    anchors: AnchorSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(LipextStatus, String);

impl From<JlError> for Failure {
    fn from(e: JlError) -> Self {
        let status = match e {
            JlError::RankDeficient(_) | JlError::SolverFailure(_) => LipextStatus::Numerical,
            JlError::Io(_) => LipextStatus::Io,
            _ => LipextStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

impl From<MetricError> for Failure {
    fn from(e: MetricError) -> Self {
        Failure(LipextStatus::InvalidInput, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(LipextStatus::InvalidInput, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LipextStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LipextStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic in lipext".into());
            LipextStatus::Panic
        }
    }
}

unsafe fn slice<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(Failure(LipextStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn slice_mut<'a>(ptr: *mut f64, len: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if ptr.is_null() {
        return Err(Failure(LipextStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts_mut(ptr, len))
}

fn matrix(data: &[f64], rows: usize, cols: usize) -> RowMatrix {
    RowMatrix::from_vec(rows, cols, data.to_vec()).expect("slice sized rows * cols")
}

fn checked_len(a: usize, b: usize) -> Result<usize, Failure> {
    a.checked_mul(b).ok_or_else(|| invalid("shape overflow"))
}

unsafe fn euclidean_anchors(coords: *const f64, n: usize, dim: usize) -> Result<FiniteMetric, Failure> {
    if n == 0 || dim == 0 {
        return Err(invalid("need n >= 1 anchors with dim >= 1"));
    }
    let c = slice(coords, checked_len(n, dim)?, "anchor_coords")?;
    Ok(metric::euclidean_metric(matrix(c, n, dim))?)
}

unsafe fn explicit_anchors(dists: *const f64, n: usize) -> Result<FiniteMetric, Failure> {
    if n == 0 {
        return Err(invalid("need n >= 1 anchors"));
    }
    let d = slice(dists, checked_len(n, n)?, "anchor_dists")?;
    Ok(FiniteMetric::from_distances(matrix(d, n, n))?)
}

unsafe fn finish_build(
    metric: FiniteMetric,
    values: *const f64,
    p: usize,
    seed: u64,
    samples: usize,
    out: *mut *mut LipextOperator,
) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(LipextStatus::NullPointer, "out is null".into()));
    }
    *out = ptr::null_mut();
    if p == 0 {
        return Err(invalid("target dimension p must be >= 1"));
    }
    let n = metric.len();
    let v = slice(values, checked_len(n, p)?, "values")?;
    let anchors = AnchorSet::new(metric, matrix(v, n, p))?;
    let m = if samples == 0 { default_samples(p) } else { samples };
    let op = jl_ext::build(&anchors, seed, m)?;
    *out = Box::into_raw(Box::new(LipextOperator { op, anchors }));
    Ok(())
}

/// Builds an operator for anchors given by Euclidean coordinates
/// (`n × dim`) with values `n × p`. `samples = 0` selects `max(64·p, 1024)`.
#[no_mangle]
pub unsafe extern "C" fn lipext_operator_build_euclidean(
    anchor_coords: *const f64,
    n: usize,
    dim: usize,
    values: *const f64,
    p: usize,
    seed: u64,
    samples: usize,
    out: *mut *mut LipextOperator,
) -> LipextStatus {
    guard(|| {
        let metric = euclidean_anchors(anchor_coords, n, dim)?;
        finish_build(metric, values, p, seed, samples, out)
    })
}

/// Builds an operator for anchors given by an `n × n` distance matrix.
#[no_mangle]
pub unsafe extern "C" fn lipext_operator_build_explicit(
    anchor_dists: *const f64,
    n: usize,
    values: *const f64,
    p: usize,
    seed: u64,
    samples: usize,
    out: *mut *mut LipextOperator,
) -> LipextStatus {
    guard(|| {
        let metric = explicit_anchors(anchor_dists, n)?;
        finish_build(metric, values, p, seed, samples, out)
    })
}

unsafe fn handle<'a>(op: *const LipextOperator) -> Result<&'a LipextOperator, Failure> {
    op.as_ref()
        .ok_or_else(|| Failure(LipextStatus::NullPointer, "operator is null".into()))
}

unsafe fn evaluate_into(h: &LipextOperator, qs: &QuerySet, out: *mut f64) -> Result<(), Failure> {
    let p = h.op.p();
    let dst = slice_mut(out, checked_len(qs.len(), p)?, "out")?;
    let fx = jl_ext::evaluate(&h.op, &h.anchors, qs)?;
    dst.copy_from_slice(fx.as_slice());
    Ok(())
}

/// Evaluates at `q` query points given by coordinates (`q × dim`). Writes
/// `q × p` values to `out`. Requires an operator built from coordinates.
#[no_mangle]
pub unsafe extern "C" fn lipext_operator_evaluate_euclidean(
    op: *const LipextOperator,
    query_coords: *const f64,
    q: usize,
    dim: usize,
    out: *mut f64,
) -> LipextStatus {
    guard(|| {
        let h = handle(op)?;
        let c = slice(query_coords, checked_len(q, dim)?, "query_coords")?;
        let qs = QuerySet::euclidean(matrix(c, q, dim));
        evaluate_into(h, &qs, out)
    })
}

/// Evaluates at `q` query points given by their distances to every anchor
/// (`q × n`). Writes `q × p` values to `out`.
#[no_mangle]
pub unsafe extern "C" fn lipext_operator_evaluate_explicit(
    op: *const LipextOperator,
    anchor_dists: *const f64,
    q: usize,
    out: *mut f64,
) -> LipextStatus {
    guard(|| {
        let h = handle(op)?;
        let n = h.op.n();
        let d = slice(anchor_dists, checked_len(q, n)?, "anchor_dists")?;
        let qs = QuerySet::explicit(matrix(d, q, n), None)?;
        evaluate_into(h, &qs, out)
    })
}

#[no_mangle]
pub unsafe extern "C" fn lipext_operator_certificate(
    op: *const LipextOperator,
    out: *mut LipextCertificate,
) -> LipextStatus {
    guard(|| {
        let h = handle(op)?;
        let out = out
            .as_mut()
            .ok_or_else(|| Failure(LipextStatus::NullPointer, "out is null".into()))?;
        let c = jl_ext::certificate(&h.op);
        *out = LipextCertificate {
            rms_sample_lip: c.rms_sample_lip,
            s_min: c.s_min,
            bound: c.bound,
            theory_reference: c.theory_reference,
        };
        Ok(())
    })
}

/// Largest relative residual `‖F(t) − f(t)‖ / (1 + ‖f(t)‖)` over the anchors.
#[no_mangle]
pub unsafe extern "C" fn lipext_operator_exactness(
    op: *const LipextOperator,
    out: *mut f64,
) -> LipextStatus {
    guard(|| {
        let h = handle(op)?;
        let out = out
            .as_mut()
            .ok_or_else(|| Failure(LipextStatus::NullPointer, "out is null".into()))?;
        *out = jl_ext::exactness_check(&h.op, &h.anchors)?;
        Ok(())
    })
}

/// Number of anchors, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn lipext_operator_anchor_count(op: *const LipextOperator) -> usize {
    op.as_ref().map_or(0, |h| h.op.n())
}

/// Target dimension, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn lipext_operator_dim(op: *const LipextOperator) -> usize {
    op.as_ref().map_or(0, |h| h.op.p())
}

/// Number of Gaussian samples, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn lipext_operator_samples(op: *const LipextOperator) -> usize {
    op.as_ref().map_or(0, |h| h.op.m())
}

unsafe fn path_arg<'a>(path: *const c_char) -> Result<&'a str, Failure> {
    if path.is_null() {
        return Err(Failure(LipextStatus::NullPointer, "path is null".into()));
    }
    CStr::from_ptr(path)
        .to_str()
        .map_err(|_| invalid("path is not valid UTF-8"))
}

/// Writes the operator file (anchor values, per-sample constants, seed).
#[no_mangle]
pub unsafe extern "C" fn lipext_operator_save(
    op: *const LipextOperator,
    path: *const c_char,
) -> LipextStatus {
    guard(|| {
        let h = handle(op)?;
        let path = path_arg(path)?;
        let file = File::create(path).map_err(|e| Failure(LipextStatus::Io, format!("{path}: {e}")))?;
        jl_ext::save_operator(&h.op, BufWriter::new(file))?;
        Ok(())
    })
}

unsafe fn load_with(
    path: *const c_char,
    metric: FiniteMetric,
    out: *mut *mut LipextOperator,
) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(LipextStatus::NullPointer, "out is null".into()));
    }
    *out = ptr::null_mut();
    let path = path_arg(path)?;
    let file = File::open(path).map_err(|e| Failure(LipextStatus::Io, format!("{path}: {e}")))?;
    let op = jl_ext::load_operator(BufReader::new(file))?;
    if op.n() != metric.len() {
        return Err(invalid(format!(
            "operator has {} anchors, metric has {}",
            op.n(),
            metric.len()
        )));
    }
    let anchors = AnchorSet::new(metric, op.values().clone())?;
    *out = Box::into_raw(Box::new(LipextOperator { op, anchors }));
    Ok(())
}

/// Loads an operator file; the anchor coordinates are supplied again since
/// the file stores only values.
#[no_mangle]
pub unsafe extern "C" fn lipext_operator_load_euclidean(
    path: *const c_char,
    anchor_coords: *const f64,
    n: usize,
    dim: usize,
    out: *mut *mut LipextOperator,
) -> LipextStatus {
    guard(|| {
        let metric = euclidean_anchors(anchor_coords, n, dim)?;
        load_with(path, metric, out)
    })
}

#[no_mangle]
pub unsafe extern "C" fn lipext_operator_load_explicit(
    path: *const c_char,
    anchor_dists: *const f64,
    n: usize,
    out: *mut *mut LipextOperator,
) -> LipextStatus {
    guard(|| {
        let metric = explicit_anchors(anchor_dists, n)?;
        load_with(path, metric, out)
    })
}

/// Releases a handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lipext_operator_free(op: *mut LipextOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// `2 ln m + 4`, the bound on the expected maximum of `m ≥ 2` squared
/// standard Gaussians.
#[no_mangle]
pub unsafe extern "C" fn lipext_max_square_bound(m: usize, out: *mut f64) -> LipextStatus {
    guard(|| {
        let out = out
            .as_mut()
            .ok_or_else(|| Failure(LipextStatus::NullPointer, "out is null".into()))?;
        *out = max_square_bound(m).map_err(|e| invalid(e.to_string()))?;
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lipext_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lipext_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
