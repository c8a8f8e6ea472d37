//! C interface to pentalab.
//!
//! Rationals cross the boundary as NUL-terminated `"p/q"` strings. Strings
//! returned through `char **` out-parameters are owned by the caller and
//! must be released with [`pl_string_free`]. Handles are released with their
//! matching `_free` function. Every function returns a [`PlStatus`]; on
//! failure [`pl_last_error`] describes what went wrong on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pentalab::condensation::{bareiss_det, dodgson_det, dodgson_det_with_retry};
use pentalab::dynamics::{alpha1, alpha2};
use pentalab::invariants::{eval_invariant, CoordVector, Parity};
use pentalab::polyfile::{read_matrix, write_coords};
use pentalab::reconstruct::omega_from_invariants;
use pentalab::sample::rng;
use pentalab::scalar::{fmt_q, parse_q};
use pentalab::vanishing::{lambda_direct, Reading};
use pentalab::Error;

/// Outcome of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Degenerate = 3,
    MapSingularity = 4,
    Unsupported = 5,
    Panic = 6,
}

impl From<&Error> for PlStatus {
    fn from(e: &Error) -> Self {
        match e.exit_code() {
            2 => PlStatus::InvalidInput,
            3 => PlStatus::Degenerate,
            4 => PlStatus::MapSingularity,
            _ => PlStatus::Unsupported,
        }
    }
}

/// Opaque handle to the `2n` coordinates of a twisted polygon.
pub struct PlCoords {
    inner: CoordVector,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(e: Error) -> PlStatus {
    set_error(&e.to_string());
    PlStatus::from(&e)
}

fn guard(f: impl FnOnce() -> PlStatus) -> PlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            PlStatus::Panic
        }
    }
}

fn null() -> PlStatus {
    set_error("null pointer argument");
    PlStatus::NullPointer
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, PlStatus> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(Error::InvalidInput("string is not UTF-8".into())))
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> PlStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            PlStatus::Ok
        }
        Err(_) => fail(Error::InvalidInput("string contains NUL".into())),
    }
}

fn parity(p: u32) -> Result<Parity, PlStatus> {
    match p {
        1 => Ok(Parity::Odd),
        2 => Ok(Parity::Even),
        _ => Err(fail(Error::InvalidInput(format!("parity must be 1 (odd) or 2 (even), got {p}")))),
    }
}

/// Message for the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds coordinates from `2n` rational strings.
///
/// # Safety
/// `entries` must point to `count` valid C strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_coords_new(entries: *const *const c_char, count: usize, out: *mut *mut PlCoords) -> PlStatus {
    guard(|| {
        if entries.is_null() || out.is_null() {
            return null();
        }
        let mut x = Vec::with_capacity(count);
        for i in 0..count {
            let s = match read_str(*entries.add(i)) {
                Ok(s) => s,
                Err(st) => return st,
            };
            match parse_q(s) {
                Ok(v) => x.push(v),
                Err(e) => return fail(e),
            }
        }
        match CoordVector::new(x) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(PlCoords { inner }));
                PlStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a coordinate handle. Null is ignored.
///
/// # Safety
/// `c` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pl_coords_free(c: *mut PlCoords) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// The period `n`; the handle holds `2n` coordinates. Zero for null.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pl_coords_n(c: *const PlCoords) -> usize {
    c.as_ref().map_or(0, |c| c.inner.n())
}

/// Coordinate `x_index` for `index` in `1..=2n`.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_coords_get(c: *const PlCoords, index: usize, out: *mut *mut c_char) -> PlStatus {
    guard(|| {
        let (Some(c), false) = (c.as_ref(), out.is_null()) else { return null() };
        if index == 0 || index > c.inner.len() {
            return fail(Error::OutOfRange(format!("index {index} outside 1..={}", c.inner.len())));
        }
        give_string(out, fmt_q(c.inner.get(index as i64)))
    })
}

/// The coordinates as a JSON document `{"n": …, "x": […]}`.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_coords_to_json(c: *const PlCoords, out: *mut *mut c_char) -> PlStatus {
    guard(|| {
        let (Some(c), false) = (c.as_ref(), out.is_null()) else { return null() };
        give_string(out, write_coords(&c.inner))
    })
}

/// Applies the involution `α₁` (`which = 1`) or `α₂` (`which = 2`).
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_coords_alpha(c: *const PlCoords, which: u32, out: *mut *mut PlCoords) -> PlStatus {
    guard(|| {
        let (Some(c), false) = (c.as_ref(), out.is_null()) else { return null() };
        let r = match which {
            1 => alpha1(&c.inner),
            2 => alpha2(&c.inner),
            _ => return fail(Error::InvalidInput(format!("which must be 1 or 2, got {which}"))),
        };
        match r {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(PlCoords { inner }));
                PlStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// `O_k` (`parity_code = 1`) or `E_k` (`parity_code = 2`), for `k ≤ n/2` or `k = n`.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_coords_invariant(c: *const PlCoords, k: usize, parity_code: u32, out: *mut *mut c_char) -> PlStatus {
    guard(|| {
        let (Some(c), false) = (c.as_ref(), out.is_null()) else { return null() };
        let p = match parity(parity_code) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match eval_invariant(&c.inner, k, p) {
            Ok(v) => give_string(out, fmt_q(&v)),
            Err(e) => fail(e),
        }
    })
}

/// The monodromy invariants `Ω₁, Ω₂` computed from the coordinates.
///
/// # Safety
/// `c` must be a live handle; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_coords_omega(c: *const PlCoords, omega1: *mut *mut c_char, omega2: *mut *mut c_char) -> PlStatus {
    guard(|| {
        let (Some(c), false, false) = (c.as_ref(), omega1.is_null(), omega2.is_null()) else { return null() };
        match omega_from_invariants(&c.inner) {
            Ok((a, b)) => {
                let st = give_string(omega1, fmt_q(&a));
                if st != PlStatus::Ok {
                    return st;
                }
                let st = give_string(omega2, fmt_q(&b));
                if st != PlStatus::Ok {
                    pl_string_free(*omega1);
                    *omega1 = ptr::null_mut();
                }
                st
            }
            Err(e) => fail(e),
        }
    })
}

/// Determinant of a square matrix given as `{"matrix": [[…]]}`, by
/// condensation. A vanishing interior entry is handled by mixing the matrix
/// with random unit-triangular factors drawn from `seed`.
///
/// # Safety
/// `matrix_json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_dodgson_det(matrix_json: *const c_char, seed: u64, out: *mut *mut c_char) -> PlStatus {
    guard(|| {
        if out.is_null() {
            return null();
        }
        let text = match read_str(matrix_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let m = match read_matrix(text) {
            Ok(m) => m,
            Err(e) => return fail(e),
        };
        let d = match dodgson_det(&m) {
            Err(Error::SingularInterior { .. }) => dodgson_det_with_retry(&m, &mut rng(seed), 32),
            other => other,
        };
        match d {
            Ok(v) => give_string(out, fmt_q(&v)),
            Err(e) => fail(e),
        }
    })
}

/// Determinant by fraction-free elimination, as a reference.
///
/// # Safety
/// `matrix_json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_bareiss_det(matrix_json: *const c_char, out: *mut *mut c_char) -> PlStatus {
    guard(|| {
        if out.is_null() {
            return null();
        }
        let text = match read_str(matrix_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match read_matrix(text).and_then(|m| bareiss_det(&m)) {
            Ok(v) => give_string(out, fmt_q(&v)),
            Err(e) => fail(e),
        }
    })
}

/// `λ_v` for odd `n ≥ 5` and `1 ≤ v ≤ (n-3)/2`.
///
/// # Safety
/// `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_lambda(n: usize, v: usize, re: *mut f64, im: *mut f64) -> PlStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return null();
        }
        match lambda_direct(n, v, Reading::Gap) {
            Ok(z) => {
                *re = z.re;
                *im = z.im;
                PlStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
