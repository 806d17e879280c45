//! C ABI over `ssx-core`.
//!
//! Every entry point returns an [`SsxStatus`]; on failure a message is kept per
//! thread and can be fetched with [`ssx_last_error_message`]. Series are opaque
//! handles created from the JSON literal format and released with
//! [`ssx_series_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ssx_core::literal::{parse_series_literal, scalar_from_value, AnyScalar, AnySeries};
use ssx_core::method::{run_method, MethodSpec};
use ssx_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    InsufficientOrder = 5,
    /// The approximant is not real (negative base, tower or branch).
    Complex = 6,
    /// Any other method failure; see the last error message.
    MethodFailure = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Opaque series handle.
pub struct SsxSeries {
    inner: AnySeries,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SsxStatus {
    match e {
        Error::ParseError { .. } | Error::NonUnitConstant | Error::ZeroLeadingCoefficient => SsxStatus::ParseError,
        Error::InvalidArgument(_) => SsxStatus::InvalidArgument,
        Error::InsufficientOrder { .. } => SsxStatus::InsufficientOrder,
        e if e.is_complex() => SsxStatus::Complex,
        _ => SsxStatus::MethodFailure,
    }
}

fn fail(status: SsxStatus, msg: impl Into<String>) -> SsxStatus {
    set_error(msg.into());
    status
}

fn guard(f: impl FnOnce() -> Result<(), (SsxStatus, String)>) -> SsxStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SsxStatus::Ok,
        Ok(Err((s, msg))) => fail(s, msg),
        Err(_) => fail(SsxStatus::Panic, "internal panic"),
    }
}

fn core_err(e: Error) -> (SsxStatus, String) {
    (status_of(&e), format!("{}: {e}", e.tag()))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, (SsxStatus, String)> {
    if p.is_null() {
        return Err((SsxStatus::NullPointer, format!("`{name}` is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (SsxStatus::InvalidUtf8, format!("`{name}` is not valid UTF-8")))
}

/// Parses a series literal, `{"prefactor": {"A": .., "alpha": ..}, "coeffs": [..]}`.
/// Values given as strings (`"p/q"`) keep the series exact.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ssx_series_from_json(json: *const c_char, out: *mut *mut SsxSeries) -> SsxStatus {
    guard(|| {
        if out.is_null() {
            return Err((SsxStatus::NullPointer, "`out` is null".into()));
        }
        *out = ptr::null_mut();
        let text = str_arg(json, "json")?;
        let inner = parse_series_literal(text, "<ffi>").map_err(core_err)?;
        *out = Box::into_raw(Box::new(SsxSeries { inner }));
        Ok(())
    })
}

/// # Safety
/// `series` must come from [`ssx_series_from_json`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ssx_series_free(series: *mut SsxSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Truncation order of the series, or 0 for a null handle.
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ssx_series_order(series: *const SsxSeries) -> usize {
    series.as_ref().map_or(0, |s| s.inner.order())
}

/// True when the series holds exact rationals.
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ssx_series_is_exact(series: *const SsxSeries) -> bool {
    series.as_ref().is_some_and(|s| matches!(s.inner, AnySeries::Exact(_)))
}

/// Runs the method named by `method_tag` (`family:kNpM:mode`, e.g.
/// `factor:k4:constrained`, `corrected-root:k2p2`).
///
/// `beta` is the target exponent as text (`"0.5"` or `"1/2"`), or null for
/// exponent families and free-mode factor approximants. Up to `capacity`
/// values are written to `values`; `*count` receives the number of values
/// produced even when the buffer is too small. `exponent` may be null; it
/// receives the large-x exponent or NaN when unknown.
///
/// # Safety
/// Pointers must be valid; `values` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn ssx_extrapolate(
    series: *const SsxSeries,
    method_tag: *const c_char,
    beta: *const c_char,
    values: *mut f64,
    capacity: usize,
    count: *mut usize,
    exponent: *mut f64,
) -> SsxStatus {
    guard(|| {
        let s = series.as_ref().ok_or((SsxStatus::NullPointer, "`series` is null".to_string()))?;
        if count.is_null() || (values.is_null() && capacity > 0) {
            return Err((SsxStatus::NullPointer, "`count` or `values` is null".into()));
        }
        *count = 0;
        let tag = str_arg(method_tag, "method_tag")?;
        let spec: MethodSpec = tag.parse().map_err(core_err)?;
        let beta: Option<AnyScalar> = if beta.is_null() {
            None
        } else {
            let text = str_arg(beta, "beta")?;
            let v = serde_json::Value::String(text.to_string());
            Some(scalar_from_value(&v).map_err(|t| (SsxStatus::InvalidArgument, format!("invalid beta `{t}`")))?)
        };
        let out = run_method(&s.inner, beta.as_ref(), &spec).map_err(core_err)?;
        *count = out.values.len();
        if !exponent.is_null() {
            *exponent = out.exponent.or(beta.as_ref().map(AnyScalar::to_f64)).unwrap_or(f64::NAN);
        }
        if out.values.len() > capacity {
            return Err((SsxStatus::BufferTooSmall, format!("{} values produced, capacity {capacity}", out.values.len())));
        }
        ptr::copy_nonoverlapping(out.values.as_ptr(), values, out.values.len());
        Ok(())
    })
}

/// Message of the last failure on this thread, or null. The caller owns the
/// string and releases it with [`ssx_string_free`].
#[no_mangle]
pub extern "C" fn ssx_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().clone().map_or(ptr::null_mut(), CString::into_raw))
}

/// # Safety
/// `s` must come from this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ssx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn ssx_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
