//! C ABI for `extremal-decomp`.
//!
//! Every fallible function returns an [`EdStatus`]; on failure the message is
//! available from [`ed_last_error_message`] on the same thread. Results that
//! own memory are opaque handles released by their matching `*_free`
//! function. Strings returned through `char **` out-parameters must be
//! released with [`ed_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use extremal_decomp::extremal::{
    per_alpha_bound_ln, replay_case_analysis, solve_extremal, theorem_bound_ln, BoundMode,
    CaseAnalysisReport, ExtremalCandidate,
};
use extremal_decomp::geometry::montecarlo_verify;
use extremal_decomp::quaddiff::{render_figure, CriticalPoints, QuadDiff, SceneOptions};
use extremal_decomp::specfun::{Delta, Function};
use extremal_decomp::{BoundParams, Error};
use num_complex::Complex64;

/// Status codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Validity = 3,
    Constraint = 4,
    Bracket = 5,
    Resource = 6,
    Infeasible = 7,
    PoleProximity = 8,
    OutOfRange = 9,
    Panic = 10,
}

/// Selector for [`ed_eval`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdFunction {
    F = 0,
    Psi = 1,
    Psi1 = 2,
    Psi2 = 3,
    X0 = 4,
}

/// Result of [`ed_solve`].
pub struct EdSolveResult {
    inner: ExtremalCandidate,
}

/// Result of [`ed_verify`].
pub struct EdReport {
    inner: CaseAnalysisReport,
}

/// A quadratic differential with its critical points.
pub struct EdQuadDiff {
    qd: QuadDiff,
    critical: CriticalPoints,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> EdStatus {
    match e {
        Error::Domain(_) => EdStatus::Domain,
        Error::Validity(_) => EdStatus::Validity,
        Error::Constraint(_) => EdStatus::Constraint,
        Error::Bracket(_) => EdStatus::Bracket,
        Error::Resource(_) => EdStatus::Resource,
        Error::Infeasible(_) => EdStatus::Infeasible,
        Error::PoleProximity { .. } => EdStatus::PoleProximity,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), (EdStatus, String)>>(f: F) -> EdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            EdStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            EdStatus::Panic
        }
    }
}

fn lift(e: Error) -> (EdStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (EdStatus, String) {
    (EdStatus::NullPointer, format!("{what} is null"))
}

fn params(n: usize, gamma: f64, delta: f64) -> Result<BoundParams, (EdStatus, String)> {
    BoundParams::checked(n, gamma, delta).map_err(lift)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (EdStatus, String)> {
    let c = CString::new(s).map_err(|e| (EdStatus::Panic, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ed_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ed_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Evaluates one of F, psi, psi1, psi2 (at `x`) or x0 (`x` ignored).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ed_eval(function: EdFunction, delta: f64, x: f64, out: *mut f64) -> EdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let f = match function {
            EdFunction::F => Function::F,
            EdFunction::Psi => Function::Psi,
            EdFunction::Psi1 => Function::Psi1,
            EdFunction::Psi2 => Function::Psi2,
            EdFunction::X0 => Function::X0,
        };
        let d = Delta::new(delta).map_err(lift)?;
        *out = f.eval(d, Some(x)).map_err(lift)?;
        Ok(())
    })
}

unsafe fn bound_common(
    n: usize,
    gamma: f64,
    delta: f64,
    alphas: *const f64,
    len: usize,
    out: *mut f64,
    per_alpha: bool,
) -> EdStatus {
    guard(|| {
        if alphas.is_null() {
            return Err(null("alphas"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let p = params(n, gamma, delta)?;
        let a = std::slice::from_raw_parts(alphas, len);
        let ln = if per_alpha {
            per_alpha_bound_ln(&p, a, BoundMode::Strict)
        } else {
            theorem_bound_ln(&p, a, BoundMode::Strict)
        }
        .map_err(lift)?;
        *out = ln.exp();
        Ok(())
    })
}

/// Theorem bound for the gaps `alphas[0..len]`.
///
/// # Safety
/// `alphas` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ed_theorem_bound(
    n: usize,
    gamma: f64,
    delta: f64,
    alphas: *const f64,
    len: usize,
    out: *mut f64,
) -> EdStatus {
    bound_common(n, gamma, delta, alphas, len, out, false)
}

/// Per-gap bound for `alphas[0..len]`; `Domain` when some gap is too wide.
///
/// # Safety
/// Same as [`ed_theorem_bound`].
#[no_mangle]
pub unsafe extern "C" fn ed_per_alpha_bound(
    n: usize,
    gamma: f64,
    delta: f64,
    alphas: *const f64,
    len: usize,
    out: *mut f64,
) -> EdStatus {
    bound_common(n, gamma, delta, alphas, len, out, true)
}

/// Maximizes the objective with `starts` seeded starting points.
///
/// # Safety
/// `out` must be writable; the handle is freed with [`ed_solve_result_free`].
#[no_mangle]
pub unsafe extern "C" fn ed_solve(
    n: usize,
    gamma: f64,
    delta: f64,
    starts: usize,
    seed: u64,
    out: *mut *mut EdSolveResult,
) -> EdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = params(n, gamma, delta)?;
        let c = solve_extremal(&p, starts, seed).map_err(lift)?;
        *out = Box::into_raw(Box::new(EdSolveResult { inner: c }));
        Ok(())
    })
}

/// Number of coordinates of the solution; 0 for null.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ed_solve_result_len(h: *const EdSolveResult) -> usize {
    h.as_ref().map_or(0, |r| r.inner.x.len())
}

/// Objective value (natural log of the product); NaN for null.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ed_solve_result_objective(h: *const EdSolveResult) -> f64 {
    h.as_ref().map_or(f64::NAN, |r| r.inner.objective)
}

/// Copies coordinate `i` into `out`.
///
/// # Safety
/// `h` must be null or a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ed_solve_result_x(h: *const EdSolveResult, i: usize, out: *mut f64) -> EdStatus {
    guard(|| {
        let r = h.as_ref().ok_or_else(|| null("handle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let v = r.inner.x.get(i).ok_or_else(|| {
            (EdStatus::OutOfRange, format!("index {i} out of range for {} coordinates", r.inner.x.len()))
        })?;
        *out = *v;
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from [`ed_solve`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ed_solve_result_free(h: *mut EdSolveResult) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Replays the case analysis for the given parameters.
///
/// # Safety
/// `out` must be writable; the handle is freed with [`ed_report_free`].
#[no_mangle]
pub unsafe extern "C" fn ed_verify(n: usize, gamma: f64, delta: f64, out: *mut *mut EdReport) -> EdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = params(n, gamma, delta)?;
        let r = replay_case_analysis(&p).map_err(lift)?;
        *out = Box::into_raw(Box::new(EdReport { inner: r }));
        Ok(())
    })
}

/// 1 when every link of the chain holds, 0 otherwise (and for null).
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ed_report_all_hold(h: *const EdReport) -> i32 {
    h.as_ref().map_or(0, |r| r.inner.all_hold() as i32)
}

/// The report as JSON.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ed_report_json(h: *const EdReport, out: *mut *mut c_char) -> EdStatus {
    guard(|| {
        let r = h.as_ref().ok_or_else(|| null("handle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = serde_json::to_string(&r.inner).map_err(|e| (EdStatus::Panic, e.to_string()))?;
        write_string(out, s)
    })
}

/// # Safety
/// `h` must be null or a handle from [`ed_verify`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ed_report_free(h: *mut EdReport) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Monte-Carlo check; writes the JSON report and the violation count.
///
/// # Safety
/// `json` and `violations` must be writable; either may be null to skip it.
#[no_mangle]
pub unsafe extern "C" fn ed_montecarlo(
    n: usize,
    gamma: f64,
    delta: f64,
    trials: u64,
    seed: u64,
    violations: *mut u64,
    json: *mut *mut c_char,
) -> EdStatus {
    guard(|| {
        let p = params(n, gamma, delta)?;
        let r = montecarlo_verify(&p, trials, seed).map_err(lift)?;
        if !violations.is_null() {
            *violations = r.violations();
        }
        if !json.is_null() {
            let s = serde_json::to_string(&r).map_err(|e| (EdStatus::Panic, e.to_string()))?;
            write_string(json, s)?;
        }
        Ok(())
    })
}

/// Builds Q(w) dw^2 for `n >= 2`, `0 < gamma < n^2`.
///
/// # Safety
/// `out` must be writable; the handle is freed with [`ed_quaddiff_free`].
#[no_mangle]
pub unsafe extern "C" fn ed_quaddiff_new(n: usize, gamma: f64, out: *mut *mut EdQuadDiff) -> EdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let qd = QuadDiff::new(n, gamma).map_err(lift)?;
        let critical = qd.critical_points();
        *out = Box::into_raw(Box::new(EdQuadDiff { qd, critical }));
        Ok(())
    })
}

/// Evaluates Q at `re + i im`; `PoleProximity` near a pole.
///
/// # Safety
/// `h` must be a live handle; `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ed_quaddiff_eval(
    h: *const EdQuadDiff,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> EdStatus {
    guard(|| {
        let q = h.as_ref().ok_or_else(|| null("handle"))?;
        if out_re.is_null() || out_im.is_null() {
            return Err(null("out"));
        }
        let v = q.qd.eval(Complex64::new(re, im)).map_err(lift)?;
        *out_re = v.re;
        *out_im = v.im;
        Ok(())
    })
}

/// Number of finite zeros; 0 for null.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ed_quaddiff_zero_count(h: *const EdQuadDiff) -> usize {
    h.as_ref().map_or(0, |q| q.critical.zeros.len())
}

/// Number of finite poles; 0 for null.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ed_quaddiff_pole_count(h: *const EdQuadDiff) -> usize {
    h.as_ref().map_or(0, |q| q.critical.finite_poles.len())
}

unsafe fn point_at(
    h: *const EdQuadDiff,
    i: usize,
    re: *mut f64,
    im: *mut f64,
    pick: fn(&CriticalPoints) -> &[Complex64],
) -> EdStatus {
    guard(|| {
        let q = h.as_ref().ok_or_else(|| null("handle"))?;
        if re.is_null() || im.is_null() {
            return Err(null("out"));
        }
        let pts = pick(&q.critical);
        let z = pts
            .get(i)
            .ok_or_else(|| (EdStatus::OutOfRange, format!("index {i} out of range for {} points", pts.len())))?;
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// Copies zero `i`.
///
/// # Safety
/// `h` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ed_quaddiff_zero(h: *const EdQuadDiff, i: usize, re: *mut f64, im: *mut f64) -> EdStatus {
    point_at(h, i, re, im, |c| &c.zeros)
}

/// Copies finite pole `i`.
///
/// # Safety
/// `h` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ed_quaddiff_pole(h: *const EdQuadDiff, i: usize, re: *mut f64, im: *mut f64) -> EdStatus {
    point_at(h, i, re, im, |c| &c.finite_poles)
}

/// Renders the default trajectory figure as SVG.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ed_quaddiff_svg(h: *const EdQuadDiff, orthogonal: bool, out: *mut *mut c_char) -> EdStatus {
    guard(|| {
        let q = h.as_ref().ok_or_else(|| null("handle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut opts = SceneOptions::default();
        opts.trace.orthogonal = orthogonal;
        let svg = render_figure(&q.qd, &opts).map_err(lift)?;
        write_string(out, svg)
    })
}

/// # Safety
/// `h` must be null or a handle from [`ed_quaddiff_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ed_quaddiff_free(h: *mut EdQuadDiff) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}
