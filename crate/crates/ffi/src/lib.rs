//! C ABI for tropfan.
//!
//! Every function returns a [`TropfanStatus`]; on failure the message is
//! available from [`tropfan_last_error`] on the same thread. Cycles are
//! opaque handles released with [`tropfan_cycle_free`], strings returned to
//! the caller are released with [`tropfan_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};

use num_traits::ToPrimitive;
use tropfan::cyclespec::parse_cycle;
use tropfan::irreducibility::is_globally_irreducible;
use tropfan::modulifan::{is_balanced, skeleton, Cycle};
use tropfan::paramcurves::{mult_closed, special_position, Degree, ParamType, Version};
use tropfan::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TropfanStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Dimension = 5,
    InvalidSplit = 6,
    Unbalanced = 7,
    NonIntegral = 8,
    InvalidDegree = 9,
    RefinementRequired = 10,
    NoClosedForm = 11,
    Overflow = 12,
    Panic = 13,
}

/// A weighted cycle on M_{0,n}.
pub struct TropfanCycle(Cycle);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> TropfanStatus {
    match e {
        Error::Dimension(_) => TropfanStatus::Dimension,
        Error::InvalidSplit(_) => TropfanStatus::InvalidSplit,
        Error::InvalidArgument(_) => TropfanStatus::InvalidArgument,
        Error::Unbalanced { .. } => TropfanStatus::Unbalanced,
        Error::NonIntegral { .. } => TropfanStatus::NonIntegral,
        Error::InvalidDegree(_) => TropfanStatus::InvalidDegree,
        Error::RefinementRequired(_) => TropfanStatus::RefinementRequired,
        Error::Parse(_) => TropfanStatus::Parse,
        Error::NoClosedForm(_) => TropfanStatus::NoClosedForm,
    }
}

/// Runs `f`, recording errors and panics.
fn guard(f: impl FnOnce() -> Result<(), TropfanStatus> + UnwindSafe) -> TropfanStatus {
    match catch_unwind(f) {
        Ok(Ok(())) => {
            set_error("");
            TropfanStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            TropfanStatus::Panic
        }
    }
}

fn fail(e: Error) -> TropfanStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null(what: &str) -> TropfanStatus {
    set_error(&format!("{what} is null"));
    TropfanStatus::NullPointer
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, TropfanStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(&format!("{what} is not UTF-8"));
        TropfanStatus::InvalidUtf8
    })
}

unsafe fn cycle<'a>(p: *const TropfanCycle) -> Result<&'a Cycle, TropfanStatus> {
    p.as_ref().map(|c| &c.0).ok_or_else(|| null("cycle"))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), TropfanStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no nul bytes").into_raw()
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn tropfan_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a cycle spec such as `psi:1+psi:2` on M_{0,n}.
///
/// # Safety
/// `spec` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tropfan_cycle_parse(
    n: usize,
    spec: *const c_char,
    out: *mut *mut TropfanCycle,
) -> TropfanStatus {
    guard(|| {
        let spec = text(spec, "spec")?;
        let z = parse_cycle(n, spec).map_err(fail)?;
        put(out, Box::into_raw(Box::new(TropfanCycle(z))), "out")
    })
}

/// The codimension-`codim` skeleton of M_{0,n} with weight one.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tropfan_cycle_skeleton(n: usize, codim: usize, out: *mut *mut TropfanCycle) -> TropfanStatus {
    guard(|| {
        let z = skeleton(n, codim).map_err(fail)?;
        put(out, Box::into_raw(Box::new(TropfanCycle(z))), "out")
    })
}

/// Releases a cycle. Null is ignored.
///
/// # Safety
/// `cycle` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tropfan_cycle_free(cycle: *mut TropfanCycle) {
    if !cycle.is_null() {
        drop(Box::from_raw(cycle));
    }
}

/// # Safety
/// `cycle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tropfan_cycle_cone_count(cycle: *const TropfanCycle, out: *mut usize) -> TropfanStatus {
    guard(|| put(out, self::cycle(cycle)?.len(), "out"))
}

/// # Safety
/// `cycle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tropfan_cycle_dim(cycle: *const TropfanCycle, out: *mut usize) -> TropfanStatus {
    guard(|| put(out, self::cycle(cycle)?.dim(), "out"))
}

/// # Safety
/// `cycle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tropfan_cycle_is_balanced(cycle: *const TropfanCycle, out: *mut bool) -> TropfanStatus {
    guard(|| put(out, is_balanced(self::cycle(cycle)?).is_balanced(), "out"))
}

/// Writes the cycle as JSON `{"n","dim","cones":[{"splits","weight"}]}`.
///
/// # Safety
/// `cycle` must be a live handle and `out` a valid pointer. The string must
/// be released with `tropfan_string_free`.
#[no_mangle]
pub unsafe extern "C" fn tropfan_cycle_to_json(cycle: *const TropfanCycle, out: *mut *mut c_char) -> TropfanStatus {
    guard(|| {
        let json = serde_json::to_string(self::cycle(cycle)?).expect("cycles serialize");
        put(out, to_c_string(json), "out")
    })
}

/// Whether the cycle is irreducible, and the dimension of its weight space.
///
/// # Safety
/// `cycle` must be a live handle; the output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tropfan_cycle_irreducible(
    cycle: *const TropfanCycle,
    global: *mut bool,
    weight_space_dim: *mut usize,
) -> TropfanStatus {
    guard(|| {
        let r = is_globally_irreducible(self::cycle(cycle)?).map_err(fail)?;
        put(global, r.global, "global")?;
        put(weight_space_dim, r.weight_space_dim, "weight_space_dim")
    })
}

/// Multiplicity of a codimension-one type of plane curves with `m - 1`
/// contracted markings. `closed` receives the closed-form value when the type
/// has one (`has_closed` tells which).
///
/// # Safety
/// `degree` and `ctype` must be nul-terminated strings; the output pointers
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn tropfan_mult(
    degree: *const c_char,
    ctype: *const c_char,
    direct: *mut i64,
    closed: *mut i64,
    has_closed: *mut bool,
) -> TropfanStatus {
    guard(|| {
        let d: Degree = text(degree, "degree")?.parse().map_err(fail)?;
        let p = ParamType::parse(d, text(ctype, "type")?).map_err(fail)?;
        let overflow = || {
            set_error("multiplicity does not fit in 64 bits");
            TropfanStatus::Overflow
        };
        let value = p.mult_direct().map_err(fail)?;
        put(direct, value.to_i64().ok_or_else(overflow)?, "direct")?;
        match mult_closed(&p) {
            Ok(c) => {
                put(closed, c.to_i64().ok_or_else(overflow)?, "closed")?;
                put(has_closed, true, "has_closed")
            }
            Err(Error::NoClosedForm(_)) => {
                put(closed, 0, "closed")?;
                put(has_closed, false, "has_closed")
            }
            Err(e) => Err(fail(e)),
        }
    })
}

/// The image cells of the special-position cycle as a JSON array of
/// `{"rays","weight"}`. `version` is `"v1"` or `"v2"`.
///
/// # Safety
/// `degree` and `version` must be nul-terminated strings and `out` a valid
/// pointer. The string must be released with `tropfan_string_free`.
#[no_mangle]
pub unsafe extern "C" fn tropfan_special_position_json(
    degree: *const c_char,
    version: *const c_char,
    out: *mut *mut c_char,
) -> TropfanStatus {
    guard(|| {
        let d: Degree = text(degree, "degree")?.parse().map_err(fail)?;
        let v: Version = text(version, "version")?.parse().map_err(fail)?;
        let cells = special_position(&d, v).map_err(fail)?;
        put(out, to_c_string(serde_json::to_string(&cells).expect("cells serialize")), "out")
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tropfan_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
