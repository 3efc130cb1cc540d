use std::ffi::{c_char, c_int, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use isoverify_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { iso_string_free(s) };
    out
}

fn last_error() -> String {
    let p = iso_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn data(name: &str) -> CString {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name);
    CString::new(p.to_str().unwrap()).unwrap()
}

#[test]
fn curve_round_trip() {
    let coeffs = CString::new("1,-1,0,-107,-379").unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { iso_curve_new(coeffs.as_ptr(), &mut c) }, IsoStatus::Ok);

    let mut j = ptr::null_mut();
    assert_eq!(unsafe { iso_curve_j_invariant(c, &mut j) }, IsoStatus::Ok);
    assert_eq!(take(j), "2268945/128");

    let (mut n, mut a) = (0u64, 0i64);
    assert_eq!(unsafe { iso_curve_count_points(c, 3, &mut n, &mut a) }, IsoStatus::Ok);
    assert_eq!((n, a), (4, 0));
    assert_eq!(unsafe { iso_curve_count_points(c, 5, &mut n, &mut a) }, IsoStatus::BadReduction);
    assert!(last_error().contains('5'));

    let mut ok: c_int = -1;
    for p in [3u64, 11, 13, 101] {
        assert_eq!(unsafe { iso_curve_local_admits(c, p, 7, &mut ok) }, IsoStatus::Ok);
        assert_eq!(ok, 1, "p = {p}");
    }
    assert_eq!(unsafe { iso_curve_local_admits(c, 3, 3, &mut ok) }, IsoStatus::InvalidArgument);
    assert_eq!(unsafe { iso_curve_local_admits(c, 7, 7, &mut ok) }, IsoStatus::BadReduction);
    unsafe { iso_curve_free(c) };
}

#[test]
fn curve_errors() {
    let mut c = ptr::null_mut();
    let singular = CString::new("0,0,0,0,0").unwrap();
    assert_eq!(unsafe { iso_curve_new(singular.as_ptr(), &mut c) }, IsoStatus::SingularCurve);
    assert!(c.is_null());
    let junk = CString::new("1,2,x").unwrap();
    assert_eq!(unsafe { iso_curve_new(junk.as_ptr(), &mut c) }, IsoStatus::Parse);
    assert_eq!(unsafe { iso_curve_new(ptr::null(), &mut c) }, IsoStatus::NullPointer);
    assert!(last_error().contains("null"));
    let bad_utf8 = [0xffu8 as c_char, 0];
    assert_eq!(unsafe { iso_curve_new(bad_utf8.as_ptr(), &mut c) }, IsoStatus::InvalidUtf8);
    let mut j = ptr::null_mut();
    assert_eq!(unsafe { iso_curve_j_invariant(ptr::null(), &mut j) }, IsoStatus::NullPointer);
    unsafe {
        iso_curve_free(ptr::null_mut());
        iso_string_free(ptr::null_mut());
    }
}

#[test]
fn modpoly_calls() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { iso_modpoly_load(data("phi2.txt").as_ptr(), &mut m) }, IsoStatus::Ok);
    assert_eq!(unsafe { iso_modpoly_level(m) }, 2);
    assert_eq!(unsafe { iso_modpoly_level(ptr::null()) }, 0);

    // 1728 has the rational 2-isogenous j = 287496
    let j = CString::new("1728").unwrap();
    let mut roots = ptr::null_mut();
    assert_eq!(unsafe { iso_modpoly_rational_roots(m, j.as_ptr(), &mut roots) }, IsoStatus::Ok);
    assert!(take(roots).split(',').any(|r| r == "287496"));

    let mut count = 0u64;
    assert_eq!(unsafe { iso_modpoly_fp_root_count(m, 1728 % 101, 101, &mut count) }, IsoStatus::Ok);
    assert!(count >= 1);
    assert_eq!(unsafe { iso_modpoly_fp_root_count(m, 0, 2, &mut count) }, IsoStatus::InvalidArgument);
    assert_eq!(unsafe { iso_modpoly_fp_root_count(m, 0, 9, &mut count) }, IsoStatus::InvalidArgument);
    unsafe { iso_modpoly_free(m) };

    let mut m = ptr::null_mut();
    let missing = CString::new("/nonexistent/phi7.txt").unwrap();
    assert_eq!(unsafe { iso_modpoly_load(missing.as_ptr(), &mut m) }, IsoStatus::Io);
    assert!(m.is_null());
}

#[test]
fn arithmetic_and_lemma() {
    let mut h = 0u64;
    assert_eq!(unsafe { iso_class_number(-343, &mut h) }, IsoStatus::Ok);
    assert_eq!(h, 7);
    assert_eq!(unsafe { iso_class_number(-5, &mut h) }, IsoStatus::InvalidArgument);

    let (mut classes, mut holds) = (0u64, 0 as c_int);
    assert_eq!(unsafe { iso_lemma_check(5, &mut classes, &mut holds) }, IsoStatus::Ok);
    assert_eq!((classes, holds), (0, 1));
    assert_eq!(unsafe { iso_lemma_check(11, &mut classes, &mut holds) }, IsoStatus::InvalidArgument);
}

#[test]
fn run_entry_point() {
    let args: Vec<CString> = ["--no-timing", "classnumber", "--disc", "-23"]
        .iter()
        .map(|s| CString::new(*s).unwrap())
        .collect();
    let ptrs: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let mut out = ptr::null_mut();
    let code = unsafe { iso_run(ptrs.as_ptr(), ptrs.len(), &mut out) };
    assert_eq!(code, 0);
    let text = take(out);
    assert!(text.contains("\"h\":3"), "{text}");

    let bad = [CString::new("lemma").unwrap(), CString::new("--ell").unwrap(), CString::new("13").unwrap()];
    let ptrs: Vec<*const c_char> = bad.iter().map(|a| a.as_ptr()).collect();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { iso_run(ptrs.as_ptr(), ptrs.len(), &mut out) }, 2);
    take(out);
    assert_eq!(unsafe { iso_run(ptr::null(), 1, &mut out) }, -1);
    assert_eq!(unsafe { iso_run(ptrs.as_ptr(), ptrs.len(), ptr::null_mut()) }, -1);
}

#[test]
fn header_compiles_as_c() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let header = include.join("isoverify.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["iso_curve_new", "iso_modpoly_load", "iso_run", "iso_last_error", "ISO_STATUS_OK"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let src = std::env::temp_dir().join(format!("isoverify_hdr_{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"isoverify.h\"\nint main(void) { IsoCurve *c = 0; return iso_curve_new(\"0,0,0,1,0\", &c) == ISO_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .status()
    else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    std::fs::remove_file(&src).ok();
    assert!(status.success());
}
