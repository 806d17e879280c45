use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ssx_ffi::*;

const SQRT: &str = r#"{"prefactor": {"A": "1", "alpha": 0}, "coeffs": ["1", "1/2", "-1/8", "1/16", "-5/128"]}"#;

fn series(json: &str) -> *mut SsxSeries {
    let text = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ssx_series_from_json(text.as_ptr(), &mut out) }, SsxStatus::Ok);
    assert!(!out.is_null());
    out
}

fn last_error() -> Option<String> {
    let p = ssx_last_error_message();
    if p.is_null() {
        return None;
    }
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { ssx_string_free(p) };
    Some(s)
}

fn extrapolate(s: *const SsxSeries, tag: &str, beta: Option<&str>, cap: usize) -> (SsxStatus, Vec<f64>, usize, f64) {
    let tag = CString::new(tag).unwrap();
    let beta = beta.map(|b| CString::new(b).unwrap());
    let mut buf = vec![0.0; cap];
    let (mut n, mut e) = (0usize, 0.0);
    let st = unsafe {
        ssx_extrapolate(
            s,
            tag.as_ptr(),
            beta.as_ref().map_or(ptr::null(), |b| b.as_ptr()),
            buf.as_mut_ptr(),
            cap,
            &mut n,
            &mut e,
        )
    };
    (st, buf, n, e)
}

#[test]
fn handle_lifecycle() {
    let s = series(SQRT);
    assert_eq!(unsafe { ssx_series_order(s) }, 4);
    assert!(unsafe { ssx_series_is_exact(s) });
    unsafe { ssx_series_free(s) };
    unsafe { ssx_series_free(ptr::null_mut()) };
    assert_eq!(unsafe { ssx_series_order(ptr::null()) }, 0);
}

#[test]
fn sqrt_amplitude_via_every_exact_family() {
    let s = series(SQRT);
    for tag in ["factor:k2:constrained", "root:k1", "root:k3", "pade:k2"] {
        let (st, v, n, e) = extrapolate(s, tag, Some("1/2"), 4);
        assert_eq!(st, SsxStatus::Ok, "{tag}: {:?}", last_error());
        assert_eq!(n, 1);
        assert!((v[0] - 1.0).abs() < 1e-9, "{tag}: {}", v[0]);
        assert_eq!(e, 0.5);
    }
    unsafe { ssx_series_free(s) };
}

#[test]
fn free_mode_needs_no_beta() {
    let s = series(SQRT);
    let (st, v, _, e) = extrapolate(s, "factor:k2:free", None, 2);
    assert_eq!(st, SsxStatus::Ok);
    assert!((v[0] - 1.0).abs() < 1e-9);
    assert!((e - 0.5).abs() < 1e-9);
    unsafe { ssx_series_free(s) };
}

#[test]
fn error_codes() {
    let s = series(SQRT);
    let (st, ..) = extrapolate(s, "root:k1", Some("0"), 1);
    assert_eq!(st, SsxStatus::MethodFailure);
    assert!(last_error().unwrap().starts_with("zero-gamma"));

    let (st, ..) = extrapolate(s, "nonsense", Some("1"), 1);
    assert_eq!(st, SsxStatus::InvalidArgument);
    let (st, ..) = extrapolate(s, "root:k1", Some("x"), 1);
    assert_eq!(st, SsxStatus::InvalidArgument);
    let (st, ..) = extrapolate(s, "root:k9", Some("1/2"), 1);
    assert_eq!(st, SsxStatus::InsufficientOrder);
    let (st, _, n, _) = extrapolate(s, "root:k1", Some("1/2"), 0);
    assert_eq!((st, n), (SsxStatus::BufferTooSmall, 1));

    let (st, ..) = extrapolate(s, "factor:k2:constrained", Some("1/2"), 1);
    assert_eq!(st, SsxStatus::Ok);
    assert_eq!(last_error(), None);
    unsafe { ssx_series_free(s) };

    let bad = CString::new(r#"{"prefactor": {"A": 1, "alpha": 0}, "coeffs": [2, 1]}"#).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ssx_series_from_json(bad.as_ptr(), &mut out) }, SsxStatus::ParseError);
    assert!(out.is_null());
    assert_eq!(unsafe { ssx_series_from_json(ptr::null(), &mut out) }, SsxStatus::NullPointer);
}

#[test]
fn complex_status() {
    // (1 - x)^{1/2}: the first-order root base turns negative.
    let s = series(r#"{"prefactor": {"A": "1", "alpha": 0}, "coeffs": ["1", "-1/2", "-1/8"]}"#);
    let (st, ..) = extrapolate(s, "root:k1", Some("1/2"), 1);
    assert_eq!(st, SsxStatus::Complex);
    unsafe { ssx_series_free(s) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(ssx_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let h = std::fs::read_to_string(dir.join("include/ssx.h")).unwrap();
    for name in [
        "ssx_series_from_json",
        "ssx_series_free",
        "ssx_series_order",
        "ssx_series_is_exact",
        "ssx_extrapolate",
        "ssx_last_error_message",
        "ssx_string_free",
        "ssx_version",
        "SSX_STATUS_COMPLEX",
        "typedef struct SsxSeries SsxSeries",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

/// Compiles the C smoke program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ssx_smoke");
    // The test binary sits next to the freshly built library in `deps/`.
    let lib = std::env::current_exe().unwrap().with_file_name("libssx_ffi.a");
    if !lib.exists() {
        panic!("static library not found at {}", lib.display());
    }
    let status = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("cc not runnable");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "smoke exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).contains("zero-gamma"));
}
