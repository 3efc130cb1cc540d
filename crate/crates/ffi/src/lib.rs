//! C ABI over `isoverify`.
//!
//! Every fallible call returns an [`IsoStatus`]. On failure the message is
//! available from [`iso_last_error`] until the next failing call on the same
//! thread. Strings returned through `char **` are owned by the caller and
//! must be released with [`iso_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use isoverify::arith::{parse_rational, PrimeField};
use isoverify::classno::class_number;
use isoverify::ecfp::{local_isogeny_admitted, reduce_and_count};
use isoverify::ecq::WeierstrassCurve;
use isoverify::localglobal::lemma1_verify;
use isoverify::modpoly::{evaluate_at_j, fp_root_count, load_modpoly, rational_linear_factors, ModularPolynomial};
use isoverify::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    SingularCurve = 5,
    BadReduction = 6,
    Io = 7,
    Internal = 8,
}

/// Opaque elliptic curve over Q.
pub struct IsoCurve(WeierstrassCurve);

/// Opaque classical modular polynomial.
pub struct IsoModPoly(ModularPolynomial);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> IsoStatus {
    match e {
        Error::Parse(_) | Error::FileParse { .. } | Error::InvalidModPoly(_) => IsoStatus::Parse,
        Error::SingularCurve => IsoStatus::SingularCurve,
        Error::BadReduction(_) | Error::DenominatorCollision(_) => IsoStatus::BadReduction,
        Error::Io { .. } => IsoStatus::Io,
        _ => IsoStatus::InvalidArgument,
    }
}

struct Fail(IsoStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> IsoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IsoStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            IsoStatus::Internal
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail(IsoStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(IsoStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail(IsoStatus::NullPointer, format!("{what} is null")));
    }
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(IsoStatus::NullPointer, format!("{what} is null")))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s).unwrap().into_raw()
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn iso_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn iso_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `"a1,a2,a3,a4,a6"` (rationals allowed).
///
/// # Safety
/// `coeffs` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iso_curve_new(coeffs: *const c_char, out: *mut *mut IsoCurve) -> IsoStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let e = WeierstrassCurve::parse(text(coeffs, "coeffs")?)?;
        *out = Box::into_raw(Box::new(IsoCurve(e)));
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle from [`iso_curve_new`], freed at most once.
#[no_mangle]
pub unsafe extern "C" fn iso_curve_free(c: *mut IsoCurve) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// j-invariant as a reduced fraction string.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iso_curve_j_invariant(c: *const IsoCurve, out: *mut *mut c_char) -> IsoStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let c = handle(c, "curve")?;
        *out = to_c(c.0.j_invariant().to_string());
        Ok(())
    })
}

/// Point count and trace of Frobenius at the good prime `p`.
///
/// # Safety
/// `c` must be a live handle; `count` and `a_p` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iso_curve_count_points(
    c: *const IsoCurve,
    p: u64,
    count: *mut u64,
    a_p: *mut i64,
) -> IsoStatus {
    guard(|| {
        out_ptr(count, "count")?;
        out_ptr(a_p, "a_p")?;
        let c = handle(c, "curve")?;
        let d = reduce_and_count(&c.0, p)?;
        match (d.count, d.a_p) {
            (Some(n), Some(a)) if d.good => {
                *count = n;
                *a_p = a;
                Ok(())
            }
            _ => Err(Error::BadReduction(p).into()),
        }
    })
}

/// Writes 1 if the reduction at `p` has an `ell`-isogeny over F_p, else 0.
///
/// # Safety
/// `c` must be a live handle; `admitted` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iso_curve_local_admits(
    c: *const IsoCurve,
    p: u64,
    ell: u64,
    admitted: *mut c_int,
) -> IsoStatus {
    guard(|| {
        out_ptr(admitted, "admitted")?;
        let c = handle(c, "curve")?;
        let d = reduce_and_count(&c.0, p)?;
        *admitted = local_isogeny_admitted(&d, ell)? as c_int;
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iso_modpoly_load(path: *const c_char, out: *mut *mut IsoModPoly) -> IsoStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let m = load_modpoly(text(path, "path")?)?;
        *out = Box::into_raw(Box::new(IsoModPoly(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from [`iso_modpoly_load`], freed at most once.
#[no_mangle]
pub unsafe extern "C" fn iso_modpoly_free(m: *mut IsoModPoly) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Level N of the polynomial, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn iso_modpoly_level(m: *const IsoModPoly) -> u64 {
    m.as_ref().map_or(0, |m| m.0.level())
}

/// Distinct roots of `Phi_N(X, j)` in F_p.
///
/// # Safety
/// `m` must be a live handle; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iso_modpoly_fp_root_count(
    m: *const IsoModPoly,
    j_mod_p: u64,
    p: u64,
    count: *mut u64,
) -> IsoStatus {
    guard(|| {
        out_ptr(count, "count")?;
        let m = handle(m, "modpoly")?;
        let field = PrimeField::new(p)?;
        *count = fp_root_count(&m.0, field.elem(j_mod_p))?;
        Ok(())
    })
}

/// Rational roots of `Phi_N(X, j)` with multiplicity, comma-separated and
/// sorted; empty when there are none.
///
/// # Safety
/// `m` must be a live handle, `j` a NUL-terminated rational, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn iso_modpoly_rational_roots(
    m: *const IsoModPoly,
    j: *const c_char,
    out: *mut *mut c_char,
) -> IsoStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let m = handle(m, "modpoly")?;
        let j = parse_rational(text(j, "j")?)?;
        let roots = rational_linear_factors(&evaluate_at_j(&m.0, &j));
        *out = to_c(roots.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","));
        Ok(())
    })
}

/// Class number of the imaginary quadratic discriminant `d`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iso_class_number(d: i64, out: *mut u64) -> IsoStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = class_number(d)?;
        Ok(())
    })
}

/// Checks the exceptional-subgroup lemma for `ell` in {2, 3, 5, 7}. Writes
/// the number of hypothesis-satisfying classes and whether all conclusions
/// hold.
///
/// # Safety
/// `classes` and `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn iso_lemma_check(ell: u64, classes: *mut u64, holds: *mut c_int) -> IsoStatus {
    guard(|| {
        out_ptr(classes, "classes")?;
        out_ptr(holds, "holds")?;
        if !matches!(ell, 2 | 3 | 5 | 7) {
            return Err(Fail(IsoStatus::InvalidArgument, format!("ell = {ell} is not in {{2, 3, 5, 7}}")));
        }
        let reports = lemma1_verify(ell, false)?;
        *classes = reports.len() as u64;
        *holds = reports.iter().all(|r| r.conclusions_hold()) as c_int;
        Ok(())
    })
}

/// Runs the command-line front end on `argv[0..argc]` (without a program
/// name). Writes the rendered report to `output` and returns the exit code
/// (0 pass, 1 violation, 2 usage or data error); -1 if `output` is null or
/// an argument is null or not UTF-8.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; `output` writable.
#[no_mangle]
pub unsafe extern "C" fn iso_run(argv: *const *const c_char, argc: usize, output: *mut *mut c_char) -> c_int {
    let mut code = -1;
    let status = guard(|| {
        out_ptr(output, "output")?;
        if argc > 0 && argv.is_null() {
            return Err(Fail(IsoStatus::NullPointer, "argv is null".into()));
        }
        let mut args = vec!["isoverify".to_string()];
        for i in 0..argc {
            args.push(text(*argv.add(i), "argument")?.to_string());
        }
        let (c, out) = isoverify::cli::run(args);
        code = c;
        *output = to_c(out);
        Ok(())
    });
    if status == IsoStatus::Ok {
        code
    } else {
        -1
    }
}
