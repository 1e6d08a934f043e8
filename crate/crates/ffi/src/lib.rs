//! C interface to the cogrowth library.
//!
//! Every fallible function returns a [`CgStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`cg_last_error_message`] on the same thread until the next call.
//! Presentations and balls are opaque handles released with their
//! `_destroy` function; strings returned by the library are released with
//! [`cg_string_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cogrowth::cayley::{build_ball, CayleyBall};
use cogrowth::counting::{count_trivial_reduced_words, count_trivial_words};
use cogrowth::exponents::{grigorchuk_eta_from_theta, grigorchuk_theta_from_eta};
use cogrowth::lab::oracle_for;
use cogrowth::locality::{alpha_of, locality_factor, min_b};
use cogrowth::pieces::{check_small_cancellation, max_piece};
use cogrowth::presentation::sample_density_presentation;
use cogrowth::rng::seeded;
use cogrowth::spectral::spectral_radius_lower_bound;
use cogrowth::vankampen::{search_diagram, SearchOutcome};
use cogrowth::word_problem::dehn_is_trivial;
use cogrowth::{DensityConfig, Error, Presentation, Word, WordKind};
use num_rational::Ratio;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Unsupported = 4,
    Budget = 5,
    Domain = 6,
    InsufficientRadius = 7,
    Internal = 8,
}

/// A group presentation.
pub struct CgPresentation(Presentation);

/// A ball in a Cayley graph.
pub struct CgBall(CayleyBall);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CgStatus {
    match e {
        Error::InvalidLetter(_) | Error::InvalidWord(_) | Error::Parse { .. } => CgStatus::Parse,
        Error::UnsupportedPresentation(_) => CgStatus::Unsupported,
        Error::RelatorBudget { .. } | Error::BallBudget { .. } => CgStatus::Budget,
        Error::Domain { .. } | Error::NoSolution { .. } => CgStatus::Domain,
        Error::InsufficientRadius { .. } => CgStatus::InsufficientRadius,
        _ => CgStatus::InvalidArgument,
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), (CgStatus, String)>) -> CgStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CgStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CgStatus::Internal
        }
    }
}

fn lift(e: Error) -> (CgStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (CgStatus, String) {
    (CgStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, (CgStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| (CgStatus::Parse, "string is not UTF-8".into()))
}

unsafe fn word(s: *const c_char) -> Result<Word, (CgStatus, String)> {
    text(s)?.parse::<Word>().map_err(lift)
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, (CgStatus, String)> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), (CgStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn cg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the text format: `m=<int>` then one relator per line.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_presentation_parse(src: *const c_char, out: *mut *mut CgPresentation) -> CgStatus {
    guard(|| {
        let p: Presentation = text(src)?.parse().map_err(lift)?;
        put(out, Box::into_raw(Box::new(CgPresentation(p))))
    })
}

/// The free group on `m` generators.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_presentation_free_group(m: usize, out: *mut *mut CgPresentation) -> CgStatus {
    guard(|| {
        let p = Presentation::free(m).map_err(lift)?;
        put(out, Box::into_raw(Box::new(CgPresentation(p))))
    })
}

/// Samples a presentation in the density model with at most
/// `relator_budget` relators.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_presentation_sample_density(
    m: usize,
    d: f64,
    ell: usize,
    reduced: bool,
    seed: u64,
    relator_budget: usize,
    out: *mut *mut CgPresentation,
) -> CgStatus {
    guard(|| {
        let kind = if reduced { WordKind::Reduced } else { WordKind::Plain };
        let cfg = DensityConfig { generators: m, density: d, length: ell, kind };
        let s = sample_density_presentation(&cfg, relator_budget, &mut seeded(seed)).map_err(lift)?;
        put(out, Box::into_raw(Box::new(CgPresentation(s.presentation))))
    })
}

/// # Safety
/// `p` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn cg_presentation_destroy(p: *mut CgPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Text form of a presentation; release with [`cg_string_free`].
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_presentation_to_text(p: *const CgPresentation, out: *mut *mut c_char) -> CgStatus {
    guard(|| put(out, to_c_string(handle(p)?.0.to_text())))
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_presentation_relator_count(p: *const CgPresentation, out: *mut usize) -> CgStatus {
    guard(|| put(out, handle(p)?.0.relators().len()))
}

/// Length of the longest piece.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_max_piece(p: *const CgPresentation, out: *mut usize) -> CgStatus {
    guard(|| put(out, max_piece(&handle(p)?.0).max_piece_length))
}

/// Whether C'(num/den) holds.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_small_cancellation(p: *const CgPresentation, num: u64, den: u64, out: *mut bool) -> CgStatus {
    guard(|| {
        if den == 0 {
            return Err((CgStatus::InvalidArgument, "zero denominator".into()));
        }
        put(out, check_small_cancellation(&handle(p)?.0, Ratio::new(num, den)).0)
    })
}

/// Dehn's algorithm; fails with `Unsupported` outside C'(1/6).
///
/// # Safety
/// `p` must be a live handle, `w` a NUL-terminated word, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cg_dehn_is_trivial(p: *const CgPresentation, w: *const c_char, out: *mut bool) -> CgStatus {
    guard(|| put(out, dehn_is_trivial(&handle(p)?.0, &word(w)?).map_err(lift)?))
}

/// Diagram search with at most `max_faces` faces. Writes 1 when a diagram
/// was found, 0 when none exists within the face bound, -1 when the budget
/// ran out.
///
/// # Safety
/// `p` must be a live handle, `w` a NUL-terminated word, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cg_vk_search(p: *const CgPresentation, w: *const c_char, max_faces: usize, budget: u64, out: *mut i32) -> CgStatus {
    guard(|| {
        let v = match search_diagram(&handle(p)?.0, &word(w)?, max_faces, budget).map_err(lift)? {
            SearchOutcome::Found(_) => 1,
            SearchOutcome::NotFound => 0,
            SearchOutcome::Indeterminate => -1,
        };
        put(out, v)
    })
}

/// Builds the ball of the given radius, using the free-group oracle when
/// there are no relators and Dehn's algorithm otherwise.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_ball_build(p: *const CgPresentation, radius: usize, budget: usize, out: *mut *mut CgBall) -> CgStatus {
    guard(|| {
        let oracle = oracle_for(&handle(p)?.0).map_err(lift)?;
        let ball = build_ball(oracle.as_ref(), radius, budget).map_err(lift)?;
        put(out, Box::into_raw(Box::new(CgBall(ball))))
    })
}

/// # Safety
/// `b` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn cg_ball_destroy(b: *mut CgBall) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// # Safety
/// `b` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_ball_size(b: *const CgBall, out: *mut usize) -> CgStatus {
    guard(|| put(out, handle(b)?.0.len()))
}

/// Exact number of trivial words of length `len` as a decimal string;
/// release with [`cg_string_free`].
///
/// # Safety
/// `b` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_count_trivial_words(b: *const CgBall, len: usize, reduced: bool, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        let ball = &handle(b)?.0;
        let n = if reduced { count_trivial_reduced_words(ball, len) } else { count_trivial_words(ball, len) }.map_err(lift)?;
        put(out, to_c_string(n.to_string()))
    })
}

/// Lower bound for the spectral radius of the simple random walk.
///
/// # Safety
/// `b` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_spectral_radius_lower_bound(b: *const CgBall, iterations: usize, tolerance: f64, out: *mut f64) -> CgStatus {
    guard(|| put(out, spectral_radius_lower_bound(&handle(b)?.0, iterations, tolerance).value))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_grigorchuk_theta_from_eta(eta: f64, m: usize, out: *mut f64) -> CgStatus {
    guard(|| put(out, grigorchuk_theta_from_eta(eta, m).map_err(lift)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_grigorchuk_eta_from_theta(theta: f64, m: usize, out: *mut f64) -> CgStatus {
    guard(|| put(out, grigorchuk_eta_from_theta(theta, m).map_err(lift)?))
}

/// `α = −1 / ln(1 − C)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_locality_alpha(c: f64, out: *mut f64) -> CgStatus {
    guard(|| put(out, alpha_of(c).map_err(lift)?))
}

/// Smallest `B` satisfying the locality inequality in base `2m − 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_locality_min_b(c: f64, m: usize, eta: f64, out: *mut f64) -> CgStatus {
    guard(|| put(out, min_b(c, m, eta).map_err(lift)?))
}

/// The product factor of the locality bound at `(C, A)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cg_locality_factor(c: f64, a: f64, m: usize, eta: f64, out: *mut f64) -> CgStatus {
    guard(|| put(out, locality_factor(c, a, m, eta).map_err(lift)?.product))
}
