//! C ABI over `lorenz-renorm`.
//!
//! Inputs and sessions are opaque handles owned by the caller and released
//! with their `_free` function. Every fallible call returns an [`LrStatus`];
//! on failure [`lr_last_error_message`] describes the cause. Panics never
//! cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lorenz_renorm::certify::{self, ArcSelection, CertInput, CertResult};
use lorenz_renorm::{Error, Scalar};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NotSafe = 3,
    RecipNotWellDefined = 4,
    Uncomparable = 5,
    ComposeNormTooLarge = 6,
    EvalNotInDomain = 7,
    DerivRadiusTooLarge = 8,
    ShiftConstantMismatch = 9,
    InternalShape = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

/// Closed interval `[lo, hi]`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LrInterval {
    pub lo: f64,
    pub hi: f64,
}

/// Certification inputs: degree, domain radii, ball radius, thresholds.
pub struct LrInput(CertInput);

/// A completed contraction run: refined fixed point, `G`, `eps`, `theta`.
pub struct LrSession {
    input: CertInput,
    result: CertResult,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> LrStatus {
    match e {
        Error::NotSafe(_) => LrStatus::NotSafe,
        Error::RecipNotWellDefined { .. } => LrStatus::RecipNotWellDefined,
        Error::Uncomparable { .. } => LrStatus::Uncomparable,
        Error::ComposeNormTooLarge { .. } => LrStatus::ComposeNormTooLarge,
        Error::EvalNotInDomain { .. } => LrStatus::EvalNotInDomain,
        Error::DerivRadiusTooLarge { .. } => LrStatus::DerivRadiusTooLarge,
        Error::ShiftConstantMismatch { .. } => LrStatus::ShiftConstantMismatch,
        Error::OddLength(_) | Error::SplitBelowTail { .. } => LrStatus::InternalShape,
        Error::InvalidDecimal(_) | Error::InvalidInput(_) => LrStatus::InvalidInput,
    }
}

enum Failure {
    Status(LrStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn null() -> Failure {
    Failure::Status(LrStatus::NullPointer, "null pointer argument".into())
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> LrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            LrStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            LrStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(LrStatus::InvalidInput, "argument is not valid UTF-8".into()))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(null)
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

/// Message for the most recent failure on this thread; empty after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates inputs with default thresholds; `sf` and `sg` are decimal
/// literals such as `"2.2"`.
///
/// # Safety
/// `sf` and `sg` must be NUL-terminated strings; `out_input` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn lr_input_new(
    d: usize,
    sf: *const c_char,
    sg: *const c_char,
    out_input: *mut *mut LrInput,
) -> LrStatus {
    guard(|| {
        let slot = out(out_input)?;
        *slot = ptr::null_mut();
        let input = CertInput::new(d, str_arg(sf)?, str_arg(sg)?)?;
        *slot = Box::into_raw(Box::new(LrInput(input)));
        Ok(())
    })
}

/// # Safety
/// `input` must come from [`lr_input_new`].
#[no_mangle]
pub unsafe extern "C" fn lr_input_set_radius(input: *mut LrInput, radius: f64) -> LrStatus {
    guard(|| {
        let i = out(input)?;
        let mut next = i.0.clone();
        next.radius = radius;
        next.validate()?;
        i.0 = next;
        Ok(())
    })
}

/// # Safety
/// `input` must come from [`lr_input_new`].
#[no_mangle]
pub unsafe extern "C" fn lr_input_set_iters(input: *mut LrInput, iters: usize) -> LrStatus {
    guard(|| {
        out(input)?.0.newton_iters = iters;
        Ok(())
    })
}

/// # Safety
/// `input` must come from [`lr_input_new`] or be null; it must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn lr_input_free(input: *mut LrInput) {
    if !input.is_null() {
        drop(Box::from_raw(input));
    }
}

/// Refines the fixed point and bounds `eps` and `theta`.
///
/// # Safety
/// `input` must come from [`lr_input_new`]; `out_session` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lr_run(input: *const LrInput, out_session: *mut *mut LrSession) -> LrStatus {
    guard(|| {
        let slot = out(out_session)?;
        *slot = ptr::null_mut();
        let input = handle(input)?.0.clone();
        let result = certify::run(&input)?;
        *slot = Box::into_raw(Box::new(LrSession { input, result }));
        Ok(())
    })
}

/// # Safety
/// `session` must come from [`lr_run`] or be null.
#[no_mangle]
pub unsafe extern "C" fn lr_session_free(session: *mut LrSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// # Safety
/// `session` must come from [`lr_run`]; `out_eps` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lr_session_eps(session: *const LrSession, out_eps: *mut f64) -> LrStatus {
    guard(|| {
        *out(out_eps)? = handle(session)?.result.eps;
        Ok(())
    })
}

/// # Safety
/// `session` must come from [`lr_run`]; `out_theta` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lr_session_theta(session: *const LrSession, out_theta: *mut f64) -> LrStatus {
    guard(|| {
        *out(out_theta)? = handle(session)?.result.theta;
        Ok(())
    })
}

/// Whether `eps < (1 - theta) r` holds and both thresholds are met.
///
/// # Safety
/// `session` must come from [`lr_run`]; `out_ok` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lr_session_contraction_ok(session: *const LrSession, out_ok: *mut bool) -> LrStatus {
    guard(|| {
        let s = handle(session)?;
        let r = &s.result;
        *out(out_ok)? = r.prop41 && r.eps_ok(&s.input) && r.theta_ok(&s.input);
        Ok(())
    })
}

/// Bounds the resolvent on an `arcs`-arc covering of the unit circle.
/// With `sample > 0` only that many seeded random arcs are checked.
/// The result is recorded in the session's certificate.
///
/// # Safety
/// `session` must come from [`lr_run`]; output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn lr_session_hyperbolicity(
    session: *mut LrSession,
    arcs: usize,
    sample: usize,
    seed: u64,
    jobs: usize,
    out_max_bound: *mut f64,
    out_pass: *mut bool,
) -> LrStatus {
    guard(|| {
        let s = out(session)?;
        let max_out = out(out_max_bound)?;
        let pass_out = out(out_pass)?;
        let selection = if sample > 0 {
            ArcSelection::Sample { count: sample, seed }
        } else {
            ArcSelection::All
        };
        let h = certify::hyperbolicity_check(
            &s.input.config,
            &s.result.fixed_point,
            s.input.radius,
            arcs,
            selection,
            s.input.hyper_bound,
            jobs,
        )?;
        *max_out = h.max_bound;
        *pass_out = h.pass();
        s.input.arcs = arcs;
        s.result.hyper = Some(h);
        Ok(())
    })
}

/// Dimension `n = 2d` of the matrix `G`.
///
/// # Safety
/// `session` must come from [`lr_run`]; `out_n` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lr_session_gamma_dim(session: *const LrSession, out_n: *mut usize) -> LrStatus {
    guard(|| {
        *out(out_n)? = handle(session)?.result.fixed_point.gamma.len();
        Ok(())
    })
}

/// Copies the entries of `G`, row-major, into `buf` of length `len >= n*n`.
///
/// # Safety
/// `buf` must point to `len` writable intervals.
#[no_mangle]
pub unsafe extern "C" fn lr_session_gamma(session: *const LrSession, buf: *mut LrInterval, len: usize) -> LrStatus {
    guard(|| {
        let g = &handle(session)?.result.fixed_point.gamma;
        let n = g.len();
        if buf.is_null() {
            return Err(null());
        }
        if len < n * n {
            return Err(Failure::Status(
                LrStatus::BufferTooSmall,
                format!("buffer holds {len} entries, {} needed", n * n),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(buf, n * n);
        for (k, c) in g.iter().flatten().enumerate() {
            dst[k] = LrInterval { lo: c.lo(), hi: c.hi() };
        }
        Ok(())
    })
}

/// Writes the certificate text, NUL-terminated, into `buf`. `out_needed`
/// receives the required size including the terminator; pass a null `buf`
/// to query it.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn lr_session_certificate(
    session: *const LrSession,
    buf: *mut c_char,
    len: usize,
    out_needed: *mut usize,
) -> LrStatus {
    guard(|| {
        let s = handle(session)?;
        let text = certify::certificate(&s.input, &s.result);
        let needed = text.len() + 1;
        *out(out_needed)? = needed;
        if buf.is_null() {
            return Ok(());
        }
        if len < needed {
            return Err(Failure::Status(
                LrStatus::BufferTooSmall,
                format!("buffer holds {len} bytes, {needed} needed"),
            ));
        }
        ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
        *buf.add(text.len()) = 0;
        Ok(())
    })
}

fn scalar(x: LrInterval) -> Result<Scalar, Failure> {
    if !(x.lo <= x.hi) {
        return Err(Failure::Status(
            LrStatus::InvalidInput,
            format!("[{}, {}] is not an interval", x.lo, x.hi),
        ));
    }
    Ok(Scalar::new(x.lo, x.hi))
}

fn interval_op(
    a: LrInterval,
    b: LrInterval,
    result: *mut LrInterval,
    op: fn(Scalar, Scalar) -> lorenz_renorm::Result<Scalar>,
) -> LrStatus {
    guard(|| {
        let r = op(scalar(a)?, scalar(b)?)?;
        // SAFETY: checked for null by `out`; the caller guarantees writability
        *unsafe { out(result)? } = LrInterval { lo: r.lo(), hi: r.hi() };
        Ok(())
    })
}

/// Enclosure of `a + b`.
#[no_mangle]
pub extern "C" fn lr_interval_add(a: LrInterval, b: LrInterval, result: *mut LrInterval) -> LrStatus {
    interval_op(a, b, result, Scalar::add)
}

/// Enclosure of `a - b`.
#[no_mangle]
pub extern "C" fn lr_interval_sub(a: LrInterval, b: LrInterval, result: *mut LrInterval) -> LrStatus {
    interval_op(a, b, result, Scalar::sub)
}

/// Enclosure of `a * b`.
#[no_mangle]
pub extern "C" fn lr_interval_mul(a: LrInterval, b: LrInterval, result: *mut LrInterval) -> LrStatus {
    interval_op(a, b, result, Scalar::mul)
}

/// Enclosure of `a / b`; fails when `b` contains zero.
#[no_mangle]
pub extern "C" fn lr_interval_div(a: LrInterval, b: LrInterval, result: *mut LrInterval) -> LrStatus {
    interval_op(a, b, result, Scalar::div)
}
