//! C ABI over `sphereclass`.
//!
//! Classes are opaque [`ScClass`] handles. Every fallible call returns an
//! [`ScStatus`]; on failure a message is stored per thread and can be fetched
//! with [`sc_last_error`]. Strings returned through out-pointers are owned by
//! the caller and must be released with [`sc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use sphereclass::classify::classify;
use sphereclass::dmgroup::{equivalent, reduce, reduce_ruled};
use sphereclass::literal::{format_class, parse_class, parse_cohomology};
use sphereclass::{BigInt, Class, Manifold};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Mismatch = 4,
    Overflow = 5,
    Internal = 6,
}

/// Manifold family selector for [`sc_class_parse`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScKind {
    Rational = 0,
    Ruled = 1,
}

/// Opaque class handle bound to its manifold.
pub struct ScClass {
    manifold: Manifold,
    class: Class,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: ScStatus, msg: impl Into<String>) -> ScStatus {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
    status
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("NUL bytes removed")
        .into_raw()
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, ScStatus> {
    if p.is_null() {
        return Err(fail(ScStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(ScStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn handle<'a>(p: *const ScClass) -> Result<&'a ScClass, ScStatus> {
    p.as_ref()
        .ok_or_else(|| fail(ScStatus::NullPointer, "null class handle"))
}

fn guard(f: impl FnOnce() -> ScStatus) -> ScStatus {
    std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
        .unwrap_or_else(|_| fail(ScStatus::Internal, "internal panic"))
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread, or returns null if none.
///
/// # Safety
/// The returned string must be released with [`sc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sc_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(s) => s.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `literal` on `CP^2 # k` (`kind` = `SC_KIND_RATIONAL`) or on the
/// genus-`h` ruled manifold blown up `k` times (`kind` = `SC_KIND_RULED`).
///
/// # Safety
/// `literal` must be a valid NUL-terminated string and `out` a valid pointer.
/// The handle written to `out` must be released with [`sc_class_free`].
#[no_mangle]
pub unsafe extern "C" fn sc_class_parse(
    kind: u32,
    h: u32,
    k: usize,
    literal: *const c_char,
    out: *mut *mut ScClass,
) -> ScStatus {
    guard(|| {
        if out.is_null() {
            return fail(ScStatus::NullPointer, "null out pointer");
        }
        let lit = tri!(read_str(literal));
        let manifold = match kind {
            x if x == ScKind::Rational as u32 => Manifold::rational(k),
            x if x == ScKind::Ruled as u32 => {
                tri!(Manifold::ruled(h, k).map_err(|e| fail(ScStatus::Parse, e.to_string())))
            }
            _ => return fail(ScStatus::Parse, format!("unknown manifold kind {kind}")),
        };
        let class =
            tri!(parse_class(lit, &manifold).map_err(|e| fail(ScStatus::Parse, e.to_string())));
        *out = Box::into_raw(Box::new(ScClass { manifold, class }));
        ScStatus::Ok
    })
}

/// Releases a class handle. Null is ignored.
///
/// # Safety
/// `c` must come from [`sc_class_parse`] and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sc_class_free(c: *mut ScClass) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

unsafe fn write_i64(v: BigInt, out: *mut i64) -> ScStatus {
    if out.is_null() {
        return fail(ScStatus::NullPointer, "null out pointer");
    }
    match i64::try_from(&v) {
        Ok(x) => {
            *out = x;
            ScStatus::Ok
        }
        Err(_) => fail(ScStatus::Overflow, format!("{v} does not fit in 64 bits")),
    }
}

/// Self-intersection of `c`.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sc_class_square(c: *const ScClass, out: *mut i64) -> ScStatus {
    guard(|| {
        let c = tri!(handle(c));
        write_i64(c.class.dot(&c.class), out)
    })
}

/// Intersection number of two classes on the same manifold.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sc_class_pair(
    a: *const ScClass,
    b: *const ScClass,
    out: *mut i64,
) -> ScStatus {
    guard(|| {
        let (a, b) = (tri!(handle(a)), tri!(handle(b)));
        if a.manifold != b.manifold {
            return fail(ScStatus::Mismatch, "classes live on different manifolds");
        }
        write_i64(a.class.dot(&b.class), out)
    })
}

/// Term-form literal of `c`.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer; free the result with
/// [`sc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sc_class_format(c: *const ScClass, out: *mut *mut c_char) -> ScStatus {
    guard(|| {
        let c = tri!(handle(c));
        if out.is_null() {
            return fail(ScStatus::NullPointer, "null out pointer");
        }
        *out = to_c(format_class(&c.class));
        ScStatus::Ok
    })
}

/// Reduction result and move log as JSON.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer; free the result with
/// [`sc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sc_reduce_json(c: *const ScClass, out: *mut *mut c_char) -> ScStatus {
    guard(|| {
        let c = tri!(handle(c));
        if out.is_null() {
            return fail(ScStatus::NullPointer, "null out pointer");
        }
        let v = match &c.class {
            Class::Rational(r) => serde_json::to_string(&reduce(r)),
            Class::Ruled(r) => serde_json::to_string(&reduce_ruled(r)),
        };
        match v {
            Ok(s) => {
                *out = to_c(s);
                ScStatus::Ok
            }
            Err(e) => fail(ScStatus::Internal, e.to_string()),
        }
    })
}

/// Full classification report as JSON. `omega` may be null; when given it is
/// a cohomology literal on the same manifold.
///
/// # Safety
/// `c` must be a live handle, `omega` null or a valid NUL-terminated string,
/// and `out` a valid pointer; free the result with [`sc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sc_classify_json(
    c: *const ScClass,
    omega: *const c_char,
    out: *mut *mut c_char,
) -> ScStatus {
    guard(|| {
        let c = tri!(handle(c));
        if out.is_null() {
            return fail(ScStatus::NullPointer, "null out pointer");
        }
        let w = if omega.is_null() {
            None
        } else {
            let s = tri!(read_str(omega));
            Some(tri!(
                parse_cohomology(s, &c.manifold).map_err(|e| fail(ScStatus::Parse, e.to_string()))
            ))
        };
        match classify(&c.class, &c.manifold, w.as_ref()) {
            Ok(v) => match serde_json::to_string(&v) {
                Ok(s) => {
                    *out = to_c(s);
                    ScStatus::Ok
                }
                Err(e) => fail(ScStatus::Internal, e.to_string()),
            },
            Err(e) => fail(ScStatus::Mismatch, e.to_string()),
        }
    })
}

/// Whether two rational classes lie in the same orbit.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sc_equivalent(
    a: *const ScClass,
    b: *const ScClass,
    out: *mut bool,
) -> ScStatus {
    guard(|| {
        let (a, b) = (tri!(handle(a)), tri!(handle(b)));
        if out.is_null() {
            return fail(ScStatus::NullPointer, "null out pointer");
        }
        let (Class::Rational(x), Class::Rational(y)) = (&a.class, &b.class) else {
            return fail(
                ScStatus::Mismatch,
                "orbit equivalence needs rational classes",
            );
        };
        match equivalent(x, y) {
            Ok(v) => {
                *out = v;
                ScStatus::Ok
            }
            Err(e) => fail(ScStatus::Mismatch, e.to_string()),
        }
    })
}

/// Runs the command-line front end. `args_json` is a JSON array of argument
/// strings without the program name. Standard output is written to `out` and
/// the process exit code to `code`. Usage errors still return `SC_STATUS_OK`
/// with exit code 2; their message is then available from [`sc_last_error`].
///
/// # Safety
/// `args_json` must be a valid NUL-terminated string and `out`, `code` valid
/// pointers; free `*out` with [`sc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sc_cli_run(
    args_json: *const c_char,
    out: *mut *mut c_char,
    code: *mut i32,
) -> ScStatus {
    guard(|| {
        if out.is_null() || code.is_null() {
            return fail(ScStatus::NullPointer, "null out pointer");
        }
        let s = tri!(read_str(args_json));
        let args: Vec<String> =
            tri!(serde_json::from_str(s).map_err(|e| fail(ScStatus::Parse, e.to_string())));
        let res = sphereclass::cli::run(std::iter::once("sphereclass".to_string()).chain(args));
        if res.code == 2 {
            fail(ScStatus::Parse, res.stderr.trim().to_string());
        }
        *code = res.code;
        *out = to_c(res.stdout);
        ScStatus::Ok
    })
}
