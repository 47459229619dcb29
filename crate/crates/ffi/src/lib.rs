//! C ABI over `fracmvt`.
//!
//! Every function returns an [`FmStatus`]; results come back through out
//! pointers, which are left untouched on failure. The message of the most
//! recent failure on the calling thread is available from
//! [`fracmvt_last_error`]. Expressions and right-hand sides are opaque
//! handles that must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fracmvt::expr::Ast;
use fracmvt::ivp::{solve_abm, IvpProblem};
use fracmvt::mvt::{
    differential_mvt_witness, integral_mvt_witness, simple_integral_mvt_witness, Witness,
};
use fracmvt::nagumo::{counterexample_rhs, nagumo_scan, Rhs2D};
use fracmvt::operators::{
    caputo_smooth, rl_integral, FracOrder, Mesh, Provenance, SampledFunction,
};
use fracmvt::special::{gammafn, mittag_leffler};
use fracmvt::{Error, ErrorClass};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FmStatus {
    Ok = 0,
    /// Malformed input: syntax error, bad argument, unbound variable.
    Input = 1,
    /// Numerical failure: domain error, no witness, non-finite values.
    Numeric = 2,
    /// A mathematical precondition does not hold.
    Precondition = 3,
    /// A required pointer was null, a buffer too short or a string not UTF-8.
    InvalidPointer = 4,
    /// The library panicked; this is a bug.
    Internal = 5,
}

/// Parsed expression in `x` and optionally `y`.
pub struct FmExpr(Ast);

/// Right-hand side `f(x, y)` of an initial value problem.
pub struct FmRhs(Rhs2D);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FmWitness {
    pub xi: f64,
    pub residual: f64,
    pub lo: f64,
    pub hi: f64,
    pub target: f64,
    pub degenerate: bool,
}

impl From<Witness> for FmWitness {
    fn from(w: Witness) -> Self {
        FmWitness {
            xi: w.xi,
            residual: w.residual,
            lo: w.lo,
            hi: w.hi,
            target: w.target,
            degenerate: w.degenerate,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FmNagumoReport {
    pub sup_ratio: f64,
    pub satisfied: bool,
    /// False when every sampled ratio was zero; the argmax fields are then 0.
    pub has_argmax: bool,
    pub argmax_x: f64,
    pub argmax_y1: f64,
    pub argmax_y2: f64,
    pub samples_used: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_last_error(message: &str) {
    LAST_ERROR.with(|slot| {
        let mut bytes = message.replace('\0', " ").into_bytes();
        bytes.push(0);
        *slot.borrow_mut() = bytes;
    });
}

enum Failure {
    Lib(Error),
    Pointer(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            FmStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(&e.to_string());
            match e.class() {
                ErrorClass::Input => FmStatus::Input,
                ErrorClass::Numeric => FmStatus::Numeric,
                ErrorClass::Precondition => FmStatus::Precondition,
            }
        }
        Ok(Err(Failure::Pointer(what))) => {
            set_last_error(what);
            FmStatus::InvalidPointer
        }
        Err(_) => {
            set_last_error("internal error");
            FmStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    // SAFETY: the caller promises a non-null `p` points to a live `T`.
    unsafe { p.as_ref() }.ok_or(Failure::Pointer(what))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Pointer("null output pointer"));
    }
    // SAFETY: non-null, and the caller promises it is valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Pointer("null output pointer"));
    }
    // SAFETY: as in `write`; the box is only allocated once `out` is known good.
    unsafe { out.write(Box::into_raw(Box::new(value))) };
    Ok(())
}

unsafe fn slice<'a>(p: *const f64, len: usize) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(Failure::Pointer("null input array"));
    }
    // SAFETY: the caller promises `len` readable doubles at `p`.
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

unsafe fn slice_mut<'a>(p: *mut f64, len: usize) -> Result<&'a mut [f64], Failure> {
    if p.is_null() {
        return Err(Failure::Pointer("null output array"));
    }
    // SAFETY: the caller promises `len` writable doubles at `p`.
    Ok(unsafe { std::slice::from_raw_parts_mut(p, len) })
}

/// Copies the last error message of this thread, NUL-terminated and
/// truncated to `capacity` bytes, into `buf`. Returns the buffer size needed
/// for the whole message, including the terminator.
///
/// # Safety
/// `buf` must be null or valid for `capacity` bytes of writes.
#[no_mangle]
pub unsafe extern "C" fn fracmvt_last_error(buf: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let slot = slot.borrow();
        let message: &[u8] = if slot.is_empty() { b"\0" } else { &slot };
        if !buf.is_null() && capacity > 0 {
            let n = (message.len() - 1).min(capacity - 1);
            // SAFETY: `n + 1 <= capacity` bytes, per the caller's promise.
            unsafe {
                ptr::copy_nonoverlapping(message.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
        }
        message.len()
    })
}

/// Γ(x) for `0 < x <= 30`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fracmvt_gamma(x: f64, out: *mut f64) -> FmStatus {
    guard(|| unsafe { write(out, gammafn(x)?) })
}

/// `E_α(z)` for `α ∈ (0, 1]`, `|z| <= 50`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fracmvt_mittag_leffler(alpha: f64, z: f64, out: *mut f64) -> FmStatus {
    guard(|| unsafe { write(out, mittag_leffler(alpha, z)?) })
}

/// Parses a NUL-terminated UTF-8 expression.
///
/// # Safety
/// `source` must be a valid C string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fracmvt_expr_parse(
    source: *const c_char,
    out: *mut *mut FmExpr,
) -> FmStatus {
    guard(|| {
        if source.is_null() {
            return Err(Failure::Pointer("null expression source"));
        }
        // SAFETY: a valid C string per the contract above.
        let text = unsafe { CStr::from_ptr(source) }
            .to_str()
            .map_err(|_| Failure::Pointer("expression source is not UTF-8"))?;
        let ast = fracmvt::expr::parse(text).map_err(Error::from)?;
        unsafe { write_handle(out, FmExpr(ast)) }
    })
}

/// Evaluates at `(x, y)`; `has_y = false` leaves `y` unbound.
///
/// # Safety
/// `expr` must come from [`fracmvt_expr_parse`]; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fracmvt_expr_eval(
    expr: *const FmExpr,
    x: f64,
    y: f64,
    has_y: bool,
    out: *mut f64,
) -> FmStatus {
    guard(|| {
        let e = unsafe { deref(expr, "null expression") }?;
        let v = e.0.eval(x, has_y.then_some(y))?;
        unsafe { write(out, v) }
    })
}

/// # Safety
/// `expr` must be null or come from [`fracmvt_expr_parse`], and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn fracmvt_expr_free(expr: *mut FmExpr) {
    if !expr.is_null() {
        // SAFETY: created by Box::into_raw in fracmvt_expr_parse.
        drop(unsafe { Box::from_raw(expr) });
    }
}

/// `J_a^β f` at all `len` nodes of the uniform mesh on `[a, b]`.
///
/// # Safety
/// `values` and `out` must each hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fracmvt_rl_integral(
    values: *const f64,
    len: usize,
    a: f64,
    b: f64,
    beta: f64,
    out: *mut f64,
) -> FmStatus {
    guard(|| {
        let input = unsafe { slice(values, len) }?;
        let output = unsafe { slice_mut(out, len) }?;
        let mesh = Mesh::new(a, b, len)?;
        let f = SampledFunction::new(mesh, input.to_vec(), Provenance::Computed)?;
        output.copy_from_slice(rl_integral(&f, beta)?.values());
        Ok(())
    })
}

/// Caputo derivative `D_{*a}^α f` at the `n` nodes of `[a, b]`, through the
/// symbolic `⌈α⌉`-th derivative.
///
/// # Safety
/// `f` must come from [`fracmvt_expr_parse`]; `out` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn fracmvt_caputo_smooth(
    f: *const FmExpr,
    alpha: f64,
    a: f64,
    b: f64,
    n: usize,
    out: *mut f64,
) -> FmStatus {
    guard(|| {
        let f = unsafe { deref(f, "null expression") }?;
        let output = unsafe { slice_mut(out, n) }?;
        let d = caputo_smooth(&f.0, FracOrder::new(alpha)?, Mesh::new(a, b, n)?)?;
        output.copy_from_slice(d.values());
        Ok(())
    })
}

/// Witness of `J_a^α (f g)(x) = f(ξ) J_a^α g(x)`; a null `g` means `g = 1`,
/// the unweighted theorem on `[a, x]`.
///
/// # Safety
/// `f` and a non-null `g` must come from [`fracmvt_expr_parse`]; `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fracmvt_integral_mvt_witness(
    f: *const FmExpr,
    g: *const FmExpr,
    alpha: f64,
    a: f64,
    x: f64,
    n: usize,
    out: *mut FmWitness,
) -> FmStatus {
    guard(|| {
        let f = unsafe { deref(f, "null expression") }?;
        let order = FracOrder::new(alpha)?;
        let w = if g.is_null() {
            simple_integral_mvt_witness(&f.0, order, a, x, n)?
        } else {
            let g = unsafe { deref(g, "null weight") }?;
            integral_mvt_witness(&f.0, &g.0, order, a, x, n)?
        };
        unsafe { write(out, w.into()) }
    })
}

/// Witness of the differential mean value theorem on `[a, b]`; `n` is the
/// node count of the local meshes.
///
/// # Safety
/// `f` must come from [`fracmvt_expr_parse`]; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fracmvt_differential_mvt_witness(
    f: *const FmExpr,
    alpha: f64,
    a: f64,
    b: f64,
    n: usize,
    out: *mut FmWitness,
) -> FmStatus {
    guard(|| {
        let f = unsafe { deref(f, "null expression") }?;
        let w = differential_mvt_witness(&f.0, FracOrder::new(alpha)?, a, b, n)?;
        unsafe { write(out, w.into()) }
    })
}

/// Right-hand side from an expression in `x` and `y`. The expression
/// handle stays owned by the caller.
///
/// # Safety
/// `expr` must come from [`fracmvt_expr_parse`]; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fracmvt_rhs_from_expr(
    expr: *const FmExpr,
    out: *mut *mut FmRhs,
) -> FmStatus {
    guard(|| {
        let e = unsafe { deref(expr, "null expression") }?;
        unsafe { write_handle(out, FmRhs(Rhs2D::Expr(e.0.clone()))) }
    })
}

/// `scale ·` the discontinuous right-hand side of order `α ∈ (0, 1)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fracmvt_rhs_counterexample(
    alpha: f64,
    scale: f64,
    out: *mut *mut FmRhs,
) -> FmStatus {
    guard(|| {
        let rhs = counterexample_rhs(FracOrder::new(alpha)?)?.scaled(scale);
        unsafe { write_handle(out, FmRhs(rhs)) }
    })
}

/// # Safety
/// `rhs` must come from [`fracmvt_rhs_from_expr`] or
/// [`fracmvt_rhs_counterexample`].
#[no_mangle]
pub unsafe extern "C" fn fracmvt_rhs_eval(
    rhs: *const FmRhs,
    x: f64,
    y: f64,
    out: *mut f64,
) -> FmStatus {
    guard(|| {
        let f = unsafe { deref(rhs, "null right-hand side") }?;
        unsafe { write(out, f.0.eval(x, y)?) }
    })
}

/// # Safety
/// `rhs` must be null or a live handle, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fracmvt_rhs_free(rhs: *mut FmRhs) {
    if !rhs.is_null() {
        // SAFETY: created by Box::into_raw in one of the constructors.
        drop(unsafe { Box::from_raw(rhs) });
    }
}

/// Samples the Nagumo ratio on `x = b j / nx` and all pairs of an
/// `ny`-point grid on `[ylo, yhi]`.
///
/// # Safety
/// `rhs` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fracmvt_nagumo_scan(
    rhs: *const FmRhs,
    alpha: f64,
    b: f64,
    nx: usize,
    ny: usize,
    ylo: f64,
    yhi: f64,
    out: *mut FmNagumoReport,
) -> FmStatus {
    guard(|| {
        let f = unsafe { deref(rhs, "null right-hand side") }?;
        let r = nagumo_scan(&f.0, FracOrder::new(alpha)?, b, nx, ny, (ylo, yhi))?;
        let (x, y1, y2) = r.argmax.unwrap_or_default();
        let report = FmNagumoReport {
            sup_ratio: r.sup_ratio,
            satisfied: r.satisfied,
            has_argmax: r.argmax.is_some(),
            argmax_x: x,
            argmax_y1: y1,
            argmax_y2: y2,
            samples_used: r.samples_used,
        };
        unsafe { write(out, report) }
    })
}

/// Solves `D_{*0}^α y = f(x, y)`, `y(0) = y0` on `[0, b]` with `steps`
/// uniform steps; `out` receives the `steps + 1` nodal values.
///
/// # Safety
/// `rhs` must be a live handle; `out` must hold `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fracmvt_ivp_solve(
    rhs: *const FmRhs,
    alpha: f64,
    b: f64,
    y0: f64,
    steps: usize,
    sweeps: usize,
    out: *mut f64,
    out_len: usize,
) -> FmStatus {
    guard(|| {
        let f = unsafe { deref(rhs, "null right-hand side") }?;
        if out_len != steps.saturating_add(1) {
            return Err(Failure::Pointer("output length must be steps + 1"));
        }
        let output = unsafe { slice_mut(out, out_len) }?;
        let problem = IvpProblem::new(FracOrder::new(alpha)?, b, y0, f.0.clone())?;
        output.copy_from_slice(&solve_abm(&problem, steps, sweeps)?.y);
        Ok(())
    })
}
