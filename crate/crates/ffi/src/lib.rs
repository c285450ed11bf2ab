//! C ABI over `memchain`.
//!
//! Every entry point returns a [`MemStatus`]; results travel through out
//! pointers. On failure a message is kept per thread and can be read with
//! [`mem_last_error_message`]. Handles are opaque and owned by the caller,
//! who releases them with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use memchain::cli::config::{build_curve, parse_json, CurveSpec};
use memchain::excitation::Excitation;
use memchain::taxonomy::{classify_with, ClassificationReport, ClassifyOptions, ElementDescriptor, ToleranceSet, Verdict};
use memchain::{analytic_locus, mvt_point, ConstitutiveCurve, Error, OperatingRange, Provenance};

/// Opaque constitutive curve.
pub struct MemCurve(ConstitutiveCurve);

/// Opaque classification report.
pub struct MemReport(ClassificationReport);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Capability = 4,
    BranchRequired = 5,
    InvalidCurve = 6,
    Config = 7,
    Numerical = 8,
    OutOfScope = 9,
    Inconsistent = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemVerdict {
    LocallyPassive = 0,
    LocallyActive = 1,
    Inconclusive = 2,
}

/// Raised-cosine excitation `offset - amplitude * cos(omega t)`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MemExcitation {
    pub amplitude: f64,
    pub omega: f64,
    pub offset: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> MemStatus {
    match err {
        Error::Domain { .. } => MemStatus::Domain,
        Error::Capability { .. } => MemStatus::Capability,
        Error::BranchRequired => MemStatus::BranchRequired,
        Error::InvalidCurve(_) => MemStatus::InvalidCurve,
        Error::Config { .. } => MemStatus::Config,
        Error::Numerical(_) => MemStatus::Numerical,
        Error::OutOfScope(_) => MemStatus::OutOfScope,
        Error::Inconsistent(_) => MemStatus::Inconsistent,
    }
}

struct Fail(MemStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(MemStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MemStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_error();
            MemStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_error(format!("panic: {msg}"));
            MemStatus::Panic
        }
    }
}

unsafe fn curve_ref<'a>(curve: *const MemCurve) -> Result<&'a ConstitutiveCurve, Fail> {
    curve.as_ref().map(|c| &c.0).ok_or_else(|| null("curve"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn excitation(e: MemExcitation) -> Result<Excitation, Fail> {
    Ok(Excitation::new(e.amplitude, e.omega, e.offset)?)
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn mem_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Default excitation: amplitude 1, omega 1, offset 1.
#[no_mangle]
pub extern "C" fn mem_excitation_default() -> MemExcitation {
    let e = Excitation::default();
    MemExcitation {
        amplitude: e.amplitude,
        omega: e.omega,
        offset: e.offset,
    }
}

/// Polynomial with ascending coefficients on `[range_min, range_max]`.
///
/// # Safety
/// `coefficients` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mem_curve_polynomial(
    coefficients: *const f64,
    len: usize,
    range_min: f64,
    range_max: f64,
    out: *mut *mut MemCurve,
) -> MemStatus {
    guard(|| {
        if coefficients.is_null() {
            return Err(null("coefficients"));
        }
        let coeffs = std::slice::from_raw_parts(coefficients, len).to_vec();
        let curve = ConstitutiveCurve::polynomial(coeffs, OperatingRange::new(range_min, range_max)?)?;
        write_out(out, Box::into_raw(Box::new(MemCurve(curve))))
    })
}

/// `a * tanh(b x)` on `[range_min, range_max]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mem_curve_tanh(
    a: f64,
    b: f64,
    range_min: f64,
    range_max: f64,
    out: *mut *mut MemCurve,
) -> MemStatus {
    guard(|| {
        let curve = ConstitutiveCurve::tanh_scaled(a, b, OperatingRange::new(range_min, range_max)?)?;
        write_out(out, Box::into_raw(Box::new(MemCurve(curve))))
    })
}

/// Curve from the JSON curve spec used by the command-line configs.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mem_curve_from_json(json: *const c_char, out: *mut *mut MemCurve) -> MemStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Fail(MemStatus::InvalidArgument, format!("json is not UTF-8: {e}")))?;
        let spec: CurveSpec = parse_json(text).map_err(|e| Fail(MemStatus::Config, e.to_string()))?;
        let curve = build_curve(&spec, "curve").map_err(|e| Fail(MemStatus::Config, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(MemCurve(curve))))
    })
}

/// # Safety
/// `curve` must be null or a handle from a `mem_curve_*` constructor that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn mem_curve_free(curve: *mut MemCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mem_curve_eval(curve: *const MemCurve, x: f64, out: *mut f64) -> MemStatus {
    guard(|| {
        let v = curve_ref(curve)?.eval(x)?;
        write_out(out, v)
    })
}

/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mem_curve_derivative(curve: *const MemCurve, x: f64, k: u32, out: *mut f64) -> MemStatus {
    guard(|| {
        let v = curve_ref(curve)?.derivative(x, k as usize)?;
        write_out(out, v)
    })
}

/// Mean-value point of the curve on `[a, b]`.
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mem_curve_mvt(curve: *const MemCurve, a: f64, b: f64, out: *mut f64) -> MemStatus {
    guard(|| {
        let c = mvt_point(curve_ref(curve)?, a, b)?;
        write_out(out, c)
    })
}

/// Samples of the depth-`depth` locus over one period of `grid_n` intervals
/// into caller buffers of `capacity` doubles each. `written` receives the
/// sample count (`grid_n + 1`), also when the buffers are too small.
///
/// # Safety
/// `curve` must be a live handle; `t`, `u` and `w` must each point to
/// `capacity` writable doubles; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mem_analytic_locus(
    curve: *const MemCurve,
    excitation_params: MemExcitation,
    depth: u32,
    grid_n: usize,
    t: *mut f64,
    u: *mut f64,
    w: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> MemStatus {
    guard(|| {
        let curve = curve_ref(curve)?;
        if written.is_null() {
            return Err(null("written"));
        }
        let exc = excitation(excitation_params)?;
        let grid = exc.grid(grid_n)?;
        written.write(grid.count());
        if capacity < grid.count() {
            return Err(Fail(
                MemStatus::BufferTooSmall,
                format!("need {} samples, buffers hold {capacity}", grid.count()),
            ));
        }
        if t.is_null() || u.is_null() || w.is_null() {
            return Err(null("sample buffer"));
        }
        let locus = analytic_locus(curve, &exc, depth as usize, &grid)?;
        let n = locus.len();
        ptr::copy_nonoverlapping(locus.t_values().as_ptr(), t, n);
        ptr::copy_nonoverlapping(locus.u_values().as_ptr(), u, n);
        ptr::copy_nonoverlapping(locus.w_values().as_ptr(), w, n);
        Ok(())
    })
}

/// Classifies the element `(alpha, beta)` defined by `curve`, using the
/// analytic chain and default tolerances.
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mem_classify(
    curve: *const MemCurve,
    alpha: i32,
    beta: i32,
    excitation_params: MemExcitation,
    grid_n: usize,
    out: *mut *mut MemReport,
) -> MemStatus {
    guard(|| {
        let curve = curve_ref(curve)?;
        let descriptor = ElementDescriptor::new(alpha, beta)?;
        let exc = excitation(excitation_params)?;
        let options = ClassifyOptions {
            grid_n,
            route: Provenance::Analytic,
        };
        let report = classify_with(descriptor, curve, &exc, &ToleranceSet::default(), options)?;
        write_out(out, Box::into_raw(Box::new(MemReport(report))))
    })
}

/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mem_report_verdict(report: *const MemReport, out: *mut MemVerdict) -> MemStatus {
    guard(|| {
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        let v = match report.0.verdict {
            Verdict::LocallyPassive => MemVerdict::LocallyPassive,
            Verdict::LocallyActive => MemVerdict::LocallyActive,
            Verdict::Inconclusive => MemVerdict::Inconclusive,
        };
        write_out(out, v)
    })
}

/// The full report as a JSON string, released with [`mem_string_free`].
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mem_report_to_json(report: *const MemReport, out: *mut *mut c_char) -> MemStatus {
    guard(|| {
        let report = report.as_ref().ok_or_else(|| null("report"))?;
        let json = serde_json::to_string(&report.0).map_err(|e| Fail(MemStatus::Numerical, e.to_string()))?;
        let s = CString::new(json).map_err(|e| Fail(MemStatus::Numerical, e.to_string()))?;
        write_out(out, s.into_raw())
    })
}

/// # Safety
/// `report` must be null or a live handle from [`mem_classify`].
#[no_mangle]
pub unsafe extern "C" fn mem_report_free(report: *mut MemReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mem_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
