//! C ABI for the conifold crate.
//!
//! The interface follows the usual conventions for C consumers: opaque
//! handles created and destroyed by the library, integer status codes,
//! caller-owned output buffers, and a thread-local error message for
//! diagnostics. Every entry point catches panics at the boundary — nothing
//! unwinds into foreign frames.
//!
//! Ownership rules:
//!
//! * handles from [`conifold_parse`] / [`conifold_from_fan_name`] are freed
//!   with [`conifold_free`], exactly once;
//! * strings returned through an `out` parameter are freed with
//!   [`conifold_string_free`];
//! * [`conifold_last_error_message`] and [`conifold_version`] return
//!   borrowed pointers that must not be freed — the former stays valid
//!   until the next call into the library on the same thread.
//!
//! The committed header `include/conifold.h` is generated from this file
//! (see `build.rs`); regenerate by rebuilding the crate.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use conifold::moments::{growth_estimate, moment_sequence, MomentsError};
use conifold::report::{analysis_document, to_json_pretty, ReportError};
use conifold::solver::{certify_morse, find_conifold_point, SolverError, SolverOptions};
use conifold::toric::{builtin_fan, potential_from_fan};
use conifold::{validate_support, LaurentPolynomial};

/// Result of every fallible call.
#[repr(C)]
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ConifoldStatus {
    /// The call succeeded.
    Ok = 0,
    /// The polynomial fails the interiority hypothesis; see
    /// `conifold_last_error_message` for the certificate direction.
    HypothesisViolated = 1,
    /// The input could not be parsed or exceeds a resource guard.
    InvalidInput = 2,
    /// The computation failed (iteration budget, indefinite Hessian, ...).
    NumericalFailure = 3,
    /// A pointer argument was null, a buffer too short, or an option
    /// out of range.
    InvalidArgument = 4,
}

/// Opaque handle to an exact Laurent polynomial with positive coefficients.
pub struct ConifoldPolynomial {
    inner: LaurentPolynomial,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> =
        RefCell::new(CString::new("").expect("empty string has no interior nul"));
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() =
            CString::new(sanitized).expect("nul bytes were just removed");
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new("").expect("empty string has no interior nul");
    });
}

/// Borrowed pointer to the message for the most recent failure on this
/// thread; empty string after a success. Valid until the next call into
/// the library from the same thread. Never null. Do not free.
#[no_mangle]
pub extern "C" fn conifold_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string. Do not free.
#[no_mangle]
pub extern "C" fn conifold_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Convert a guarded closure into a status, translating panics into
/// `NumericalFailure` instead of unwinding into the caller.
fn guard(body: impl FnOnce() -> ConifoldStatus) -> ConifoldStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            ConifoldStatus::NumericalFailure
        }
    }
}

fn solver_status(error: &SolverError) -> ConifoldStatus {
    match error {
        SolverError::HypothesisViolated(_) => ConifoldStatus::HypothesisViolated,
        SolverError::InvalidOptions(_) => ConifoldStatus::InvalidArgument,
        _ => ConifoldStatus::NumericalFailure,
    }
}

/// Read a handle, or fail with `InvalidArgument`.
///
/// # Safety
/// `handle` must be null or a live pointer from this library.
unsafe fn borrow_poly<'a>(
    handle: *const ConifoldPolynomial,
) -> Result<&'a LaurentPolynomial, ConifoldStatus> {
    if handle.is_null() {
        set_error("polynomial handle is null");
        return Err(ConifoldStatus::InvalidArgument);
    }
    Ok(&(*handle).inner)
}

unsafe fn read_c_string<'a>(text: *const c_char, what: &str) -> Result<&'a str, ConifoldStatus> {
    if text.is_null() {
        set_error(&format!("{what} is null"));
        return Err(ConifoldStatus::InvalidArgument);
    }
    match CStr::from_ptr(text).to_str() {
        Ok(s) => Ok(s),
        Err(_) => {
            set_error(&format!("{what} is not valid UTF-8"));
            Err(ConifoldStatus::InvalidArgument)
        }
    }
}

fn install(
    polynomial: LaurentPolynomial,
    out: *mut *mut ConifoldPolynomial,
) -> ConifoldStatus {
    let handle = Box::new(ConifoldPolynomial { inner: polynomial });
    unsafe { *out = Box::into_raw(handle) };
    clear_error();
    ConifoldStatus::Ok
}

/// Parse `text` (same grammar as the CLI, e.g. `"x1 + x2 + x1^-1*x2^-1"`)
/// into a new handle written to `*out`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn conifold_parse(
    text: *const c_char,
    out: *mut *mut ConifoldPolynomial,
) -> ConifoldStatus {
    guard(|| {
        if out.is_null() {
            set_error("output handle pointer is null");
            return ConifoldStatus::InvalidArgument;
        }
        let text = match read_c_string(text, "polynomial text") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match LaurentPolynomial::parse(text) {
            Ok(polynomial) => install(polynomial, out),
            Err(e) => {
                set_error(&e.to_string());
                ConifoldStatus::InvalidInput
            }
        }
    })
}

/// Build the standard potential of a builtin fan (`"P1"`..`"P4"`,
/// `"P1xP1"`, `"P1xP2"`, `"dP7"`, `"dP6"`, `"dP5"`/`"hexagon"`; case
/// insensitive) into a new handle written to `*out`.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn conifold_from_fan_name(
    name: *const c_char,
    out: *mut *mut ConifoldPolynomial,
) -> ConifoldStatus {
    guard(|| {
        if out.is_null() {
            set_error("output handle pointer is null");
            return ConifoldStatus::InvalidArgument;
        }
        let name = match read_c_string(name, "fan name") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let fan = match builtin_fan(name) {
            Ok(fan) => fan,
            Err(e) => {
                set_error(&e.to_string());
                return ConifoldStatus::InvalidInput;
            }
        };
        match potential_from_fan(&fan) {
            Ok(polynomial) => install(polynomial, out),
            Err(e) => {
                set_error(&e.to_string());
                ConifoldStatus::InvalidInput
            }
        }
    })
}

/// Destroy a handle. Null is a no-op.
///
/// # Safety
/// `handle` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn conifold_free(handle: *mut ConifoldPolynomial) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `handle` must be null or a live pointer from this library.
#[no_mangle]
pub unsafe extern "C" fn conifold_dimension(handle: *const ConifoldPolynomial) -> usize {
    if handle.is_null() {
        0
    } else {
        (*handle).inner.dimension()
    }
}

/// Number of monomials, or 0 for a null handle.
///
/// # Safety
/// `handle` must be null or a live pointer from this library.
#[no_mangle]
pub unsafe extern "C" fn conifold_term_count(handle: *const ConifoldPolynomial) -> usize {
    if handle.is_null() {
        0
    } else {
        (*handle).inner.term_count()
    }
}

/// Decide the interiority hypothesis. `*origin_interior` and
/// `*polytope_dim` are always written on `Ok`; the status is `Ok` even
/// when the hypothesis fails — the outcome is data here, not an error.
///
/// # Safety
/// All pointers must be valid; `handle` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn conifold_validate(
    handle: *const ConifoldPolynomial,
    origin_interior: *mut bool,
    polytope_dim: *mut usize,
) -> ConifoldStatus {
    guard(|| {
        if origin_interior.is_null() || polytope_dim.is_null() {
            set_error("output pointer is null");
            return ConifoldStatus::InvalidArgument;
        }
        let polynomial = match borrow_poly(handle) {
            Ok(p) => p,
            Err(status) => return status,
        };
        let validation = validate_support(polynomial);
        *origin_interior = validation.origin_interior;
        *polytope_dim = validation.polytope_dim;
        clear_error();
        ConifoldStatus::Ok
    })
}

fn solve(
    polynomial: &LaurentPolynomial,
    tol: f64,
    max_iter: usize,
) -> Result<conifold::ConifoldReport, ConifoldStatus> {
    let options = SolverOptions {
        gradient_tolerance: tol,
        max_iterations: max_iter,
        ..SolverOptions::default()
    };
    find_conifold_point(polynomial, &options).map_err(|e| {
        set_error(&e.to_string());
        solver_status(&e)
    })
}

/// Locate the conifold point. `point_out` must hold `point_len` doubles
/// with `point_len >= conifold_dimension(handle)`; the log coordinates of
/// the minimizer are written there and the critical value to `*value_out`.
///
/// # Safety
/// All pointers must be valid and `point_out` must have the stated length.
#[no_mangle]
pub unsafe extern "C" fn conifold_critical_point(
    handle: *const ConifoldPolynomial,
    tol: f64,
    max_iter: usize,
    point_out: *mut f64,
    point_len: usize,
    value_out: *mut f64,
) -> ConifoldStatus {
    guard(|| {
        if point_out.is_null() || value_out.is_null() {
            set_error("output pointer is null");
            return ConifoldStatus::InvalidArgument;
        }
        let polynomial = match borrow_poly(handle) {
            Ok(p) => p,
            Err(status) => return status,
        };
        if point_len < polynomial.dimension() {
            set_error("point buffer is shorter than the dimension");
            return ConifoldStatus::InvalidArgument;
        }
        let report = match solve(polynomial, tol, max_iter) {
            Ok(report) => report,
            Err(status) => return status,
        };
        let coords = report.point_log.coords();
        std::ptr::copy_nonoverlapping(coords.as_ptr(), point_out, coords.len());
        *value_out = report.critical_value;
        clear_error();
        ConifoldStatus::Ok
    })
}

/// Eigenvalues of the Hessian at the conifold point, ascending.
/// `spectrum_out` must hold `spectrum_len >= conifold_dimension(handle)`
/// doubles.
///
/// # Safety
/// All pointers must be valid and `spectrum_out` must have the stated
/// length.
#[no_mangle]
pub unsafe extern "C" fn conifold_hessian_spectrum(
    handle: *const ConifoldPolynomial,
    tol: f64,
    max_iter: usize,
    spectrum_out: *mut f64,
    spectrum_len: usize,
) -> ConifoldStatus {
    guard(|| {
        if spectrum_out.is_null() {
            set_error("output pointer is null");
            return ConifoldStatus::InvalidArgument;
        }
        let polynomial = match borrow_poly(handle) {
            Ok(p) => p,
            Err(status) => return status,
        };
        if spectrum_len < polynomial.dimension() {
            set_error("spectrum buffer is shorter than the dimension");
            return ConifoldStatus::InvalidArgument;
        }
        let report = match solve(polynomial, tol, max_iter) {
            Ok(report) => report,
            Err(status) => return status,
        };
        let spectrum = match certify_morse(polynomial, &report.point_log) {
            Ok(spectrum) => spectrum,
            Err(e) => {
                set_error(&e.to_string());
                return solver_status(&e);
            }
        };
        std::ptr::copy_nonoverlapping(spectrum.as_ptr(), spectrum_out, spectrum.len());
        clear_error();
        ConifoldStatus::Ok
    })
}

/// Estimate the exponential growth rate of the constant-term moments from
/// the exact sequence `M_0..M_kmax` (consecutive-period ratio when
/// available, k-th root otherwise). Needs at least ten nonzero moments.
///
/// # Safety
/// All pointers must be valid; `handle` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn conifold_moment_growth(
    handle: *const ConifoldPolynomial,
    kmax: usize,
    estimate_out: *mut f64,
) -> ConifoldStatus {
    guard(|| {
        if estimate_out.is_null() {
            set_error("output pointer is null");
            return ConifoldStatus::InvalidArgument;
        }
        let polynomial = match borrow_poly(handle) {
            Ok(p) => p,
            Err(status) => return status,
        };
        let sequence = match moment_sequence(polynomial, kmax) {
            Ok(sequence) => sequence,
            Err(e) => {
                set_error(&e.to_string());
                return match e {
                    MomentsError::Solver(ref solver) => solver_status(solver),
                    _ => ConifoldStatus::InvalidInput,
                };
            }
        };
        match growth_estimate(&sequence) {
            Ok(estimate) => {
                *estimate_out = estimate;
                clear_error();
                ConifoldStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                ConifoldStatus::InvalidInput
            }
        }
    })
}

/// Full analysis as a JSON document (the same bytes the CLI prints).
/// `kmax = 0` skips the moment section. On `Ok` or `HypothesisViolated`,
/// `*json_out` receives a string to release with `conifold_string_free`.
///
/// # Safety
/// All pointers must be valid; `handle` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn conifold_analyze_json(
    handle: *const ConifoldPolynomial,
    tol: f64,
    max_iter: usize,
    kmax: usize,
    json_out: *mut *mut c_char,
) -> ConifoldStatus {
    guard(|| {
        if json_out.is_null() {
            set_error("output pointer is null");
            return ConifoldStatus::InvalidArgument;
        }
        let polynomial = match borrow_poly(handle) {
            Ok(p) => p,
            Err(status) => return status,
        };
        let options = SolverOptions {
            gradient_tolerance: tol,
            max_iterations: max_iter,
            ..SolverOptions::default()
        };
        let moments = if kmax == 0 { None } else { Some(kmax) };
        let document =
            match analysis_document(polynomial, &options, moments, &Default::default()) {
                Ok(document) => document,
                Err(e) => {
                    let status = match e {
                        ReportError::Input(_) => ConifoldStatus::InvalidInput,
                        ReportError::Numerical(_) => ConifoldStatus::NumericalFailure,
                    };
                    set_error(&e.to_string());
                    return status;
                }
            };
        let json = to_json_pretty(&document);
        let c_json = CString::new(json.replace('\0', " "))
            .expect("nul bytes were just removed");
        *json_out = c_json.into_raw();
        if document.validation.origin_interior {
            clear_error();
            ConifoldStatus::Ok
        } else {
            set_error("origin is not interior to the Newton polytope");
            ConifoldStatus::HypothesisViolated
        }
    })
}

/// Release a string allocated by this library. Null is a no-op.
///
/// # Safety
/// `text` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn conifold_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}
