//! C ABI over `pade_universal`.
//!
//! Every entry point returns a [`PuStatus`] and writes its results through
//! out-pointers. Handles are opaque; whatever a function hands out is owned by
//! the caller and goes back through the matching `_free`. After a non-OK
//! status, [`pu_last_error_message`] describes the failure on the calling
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pade_universal::cli;
use pade_universal::error::Error;
use pade_universal::pade::{
    hankel_determinant, order_condition_residual, pade_approximant, rational_derivative, RationalFunction,
};
use pade_universal::series::{Complex, FormalPowerSeries, ToleranceConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PuStatus {
    Ok = 0,
    /// Malformed input: bad sizes, non-finite values, tolerances, scenario
    /// JSON, overlapping sets.
    InvalidInput = 1,
    /// The Hankel determinant vanishes, so `[f; p/q]` does not exist.
    PadeNotExist = 2,
    /// Pole proximity, degenerate denominators and other numerical failures.
    Numerical = 3,
    FitFailed = 4,
    IndexExhausted = 5,
    PerturbationFailed = 6,
    /// The build ran to the end but its certificate did not pass. The record
    /// is still returned.
    CertificateNotPassed = 7,
    NullPointer = 8,
    /// The caller's buffer is too short; the needed length was written.
    BufferTooSmall = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PuComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex> for PuComplex {
    fn from(z: Complex) -> Self {
        PuComplex { re: z.re, im: z.im }
    }
}

impl From<PuComplex> for Complex {
    fn from(z: PuComplex) -> Self {
        Complex::new(z.re, z.im)
    }
}

/// Mirrors the library's tolerance triple. Pass NULL wherever a
/// `const PuTolerances *` is accepted to get the defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuTolerances {
    pub zero: f64,
    pub det: f64,
    pub residual: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuHankel {
    pub value: PuComplex,
    /// Absolute threshold `|value|` was compared against.
    pub threshold: f64,
    pub nonvanishing: bool,
}

/// Truncated formal power series.
pub struct PuSeries(FormalPowerSeries);

/// Normalized rational function `A / B`, `B(center) = 1`.
pub struct PuRational(RationalFunction);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: PuStatus,
    message: String,
}

impl Failure {
    fn new(status: PuStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(status_of(&e), e.to_string())
    }
}

fn status_of(e: &Error) -> PuStatus {
    match e.root() {
        Error::PadeNotExist { .. } => PuStatus::PadeNotExist,
        Error::FitFailed { .. } => PuStatus::FitFailed,
        Error::IndexExhausted { .. } => PuStatus::IndexExhausted,
        Error::PerturbationFailed { .. } => PuStatus::PerturbationFailed,
        Error::NonFinite(_) => PuStatus::InvalidInput,
        _ if cli::exit_code(e) == 1 => PuStatus::InvalidInput,
        _ => PuStatus::Numerical,
    }
}

fn set_last_error(message: String) {
    // Interior NULs would truncate the message on the C side anyway.
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PuStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PuStatus::Ok,
        Ok(Err(f)) => {
            set_last_error(f.message);
            f.status
        }
        Err(payload) => {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {what}"));
            PuStatus::Panic
        }
    }
}

unsafe fn arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(PuStatus::NullPointer, format!("{name} is NULL")))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure::new(PuStatus::NullPointer, format!("{name} is NULL")))
}

unsafe fn tolerances(tol: *const PuTolerances) -> Result<ToleranceConfig, Failure> {
    match tol.as_ref() {
        None => Ok(ToleranceConfig::default()),
        Some(t) => Ok(ToleranceConfig::new(t.zero, t.det, t.residual)?),
    }
}

#[no_mangle]
pub extern "C" fn pu_tolerances_default() -> PuTolerances {
    let t = ToleranceConfig::default();
    PuTolerances {
        zero: t.zero,
        det: t.det,
        residual: t.residual,
    }
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next `pu_*` call on the same thread.
#[no_mangle]
pub extern "C" fn pu_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static, NUL-terminated crate version.
#[no_mangle]
pub extern "C" fn pu_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Series `sum coeffs[k] (z - center)^k` with `len` known coefficients.
///
/// # Safety
/// `coeffs` must point to `len` readable values (it may be NULL when `len`
/// is 0) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pu_series_new(
    center: PuComplex,
    coeffs: *const PuComplex,
    len: usize,
    out_series: *mut *mut PuSeries,
) -> PuStatus {
    guard(|| {
        let slot = out(out_series, "out_series")?;
        let coeffs = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(arg(coeffs, "coeffs")?, len)
        };
        let f = FormalPowerSeries::new(center.into(), coeffs.iter().map(|&z| z.into()).collect())?;
        *slot = Box::into_raw(Box::new(PuSeries(f)));
        Ok(())
    })
}

/// # Safety
/// `series` must come from `pu_series_new` and not be freed twice. NULL is a
/// no-op.
#[no_mangle]
pub unsafe extern "C" fn pu_series_free(series: *mut PuSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Hankel determinant `D_{p,q}` with its existence verdict.
///
/// # Safety
/// Pointers must be valid; `tol` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn pu_hankel(
    series: *const PuSeries,
    p: usize,
    q: usize,
    tol: *const PuTolerances,
    out_report: *mut PuHankel,
) -> PuStatus {
    guard(|| {
        let f = &arg(series, "series")?.0;
        let slot = out(out_report, "out_report")?;
        let r = hankel_determinant(f, p, q, &tolerances(tol)?)?;
        *slot = PuHankel {
            value: r.value.into(),
            threshold: r.threshold,
            nonvanishing: r.nonvanishing,
        };
        Ok(())
    })
}

/// Padé approximant `[f; p/q]`. Fails with `PadeNotExist` when the Hankel
/// determinant is below threshold.
///
/// # Safety
/// Pointers must be valid; `tol` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn pu_pade(
    series: *const PuSeries,
    p: usize,
    q: usize,
    tol: *const PuTolerances,
    out_rational: *mut *mut PuRational,
) -> PuStatus {
    guard(|| {
        let f = &arg(series, "series")?.0;
        let slot = out(out_rational, "out_rational")?;
        let r = pade_approximant(f, p, q, &tolerances(tol)?)?;
        *slot = Box::into_raw(Box::new(PuRational(r)));
        Ok(())
    })
}

/// # Safety
/// `rational` must come from `pu_pade` and not be freed twice. NULL is a
/// no-op.
#[no_mangle]
pub unsafe extern "C" fn pu_rational_free(rational: *mut PuRational) {
    if !rational.is_null() {
        drop(Box::from_raw(rational));
    }
}

/// Stated degrees and expansion center.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pu_rational_shape(
    rational: *const PuRational,
    out_p: *mut usize,
    out_q: *mut usize,
    out_center: *mut PuComplex,
) -> PuStatus {
    guard(|| {
        let r = &arg(rational, "rational")?.0;
        *out(out_p, "out_p")? = r.p();
        *out(out_q, "out_q")? = r.q();
        *out(out_center, "out_center")? = r.center().into();
        Ok(())
    })
}

unsafe fn copy_coeffs(src: &[Complex], buf: *mut PuComplex, cap: usize, out_len: *mut usize) -> Result<(), Failure> {
    *out(out_len, "out_len")? = src.len();
    if cap < src.len() {
        return Err(Failure::new(
            PuStatus::BufferTooSmall,
            format!("need {} coefficients, buffer holds {cap}", src.len()),
        ));
    }
    let dst = std::slice::from_raw_parts_mut(out(buf, "buf")?, src.len());
    for (d, s) in dst.iter_mut().zip(src) {
        *d = (*s).into();
    }
    Ok(())
}

/// Copies the numerator coefficients (about the center) into `buf`. The
/// needed length is always written to `out_len`; call with `cap = 0` to ask.
///
/// # Safety
/// `buf` must hold `cap` writable values.
#[no_mangle]
pub unsafe extern "C" fn pu_rational_numerator(
    rational: *const PuRational,
    buf: *mut PuComplex,
    cap: usize,
    out_len: *mut usize,
) -> PuStatus {
    guard(|| copy_coeffs(arg(rational, "rational")?.0.numerator().coeffs(), buf, cap, out_len))
}

/// Denominator counterpart of [`pu_rational_numerator`].
///
/// # Safety
/// `buf` must hold `cap` writable values.
#[no_mangle]
pub unsafe extern "C" fn pu_rational_denominator(
    rational: *const PuRational,
    buf: *mut PuComplex,
    cap: usize,
    out_len: *mut usize,
) -> PuStatus {
    guard(|| copy_coeffs(arg(rational, "rational")?.0.denominator().coeffs(), buf, cap, out_len))
}

/// `R(z)`; fails with `Numerical` next to a pole.
///
/// # Safety
/// Pointers must be valid; `tol` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn pu_rational_eval(
    rational: *const PuRational,
    z: PuComplex,
    tol: *const PuTolerances,
    out_value: *mut PuComplex,
) -> PuStatus {
    guard(|| {
        let r = &arg(rational, "rational")?.0;
        let slot = out(out_value, "out_value")?;
        *slot = r.eval(z.into(), &tolerances(tol)?)?.into();
        Ok(())
    })
}

/// `R^{(order)}(z)`, order at most 10.
///
/// # Safety
/// Pointers must be valid; `tol` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn pu_rational_derivative(
    rational: *const PuRational,
    order: usize,
    z: PuComplex,
    tol: *const PuTolerances,
    out_value: *mut PuComplex,
) -> PuStatus {
    guard(|| {
        let r = &arg(rational, "rational")?.0;
        let slot = out(out_value, "out_value")?;
        *slot = rational_derivative(r, order, &tolerances(tol)?)?.eval(z.into())?.into();
        Ok(())
    })
}

/// Largest `|a_k - b_k|`, `k <= p + q`, between the series and the Taylor
/// coefficients of `R` at the series' center.
///
/// # Safety
/// Pointers must be valid; `tol` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn pu_order_residual(
    series: *const PuSeries,
    rational: *const PuRational,
    tol: *const PuTolerances,
    out_residual: *mut f64,
) -> PuStatus {
    guard(|| {
        let f = &arg(series, "series")?.0;
        let r = &arg(rational, "rational")?.0;
        let slot = out(out_residual, "out_residual")?;
        *slot = order_condition_residual(f, r, &tolerances(tol)?)?;
        Ok(())
    })
}

/// Runs a universal build scenario (the JSON accepted by the `build`
/// command) and returns the run record as JSON in `out_record`.
///
/// On `Ok` and `CertificateNotPassed` the record is set and must be released
/// with [`pu_string_free`]. Builder failures (`FitFailed`, `IndexExhausted`,
/// ...) also return the record, carrying the diagnostic under `"error"`;
/// input errors leave `*out_record` NULL.
///
/// # Safety
/// `scenario_json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pu_build(
    scenario_json: *const c_char,
    spot_checks: usize,
    out_record: *mut *mut c_char,
) -> PuStatus {
    guard(|| {
        let slot = out(out_record, "out_record")?;
        *slot = ptr::null_mut();
        let text = CStr::from_ptr(arg(scenario_json, "scenario_json")?)
            .to_str()
            .map_err(|e| Failure::new(PuStatus::InvalidInput, format!("scenario is not UTF-8: {e}")))?;
        let raw: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Failure::new(PuStatus::InvalidInput, format!("scenario is not valid JSON: {e}")))?;
        let (mut record, outcome) = cli::build_record(raw, None, spot_checks)?;
        let failure = match outcome {
            Ok(()) if record.certificates.iter().all(|c| c.passed) => None,
            Ok(()) => Some(Failure::new(
                PuStatus::CertificateNotPassed,
                "the run completed but its certificate did not pass",
            )),
            Err(e) => {
                record.extra.insert("error".into(), cli::diagnostic(&e));
                Some(Failure::from(e))
            }
        };
        let json = CString::new(record.to_json()?)
            .map_err(|e| Failure::new(PuStatus::Numerical, format!("record contains NUL: {e}")))?;
        *slot = json.into_raw();
        failure.map_or(Ok(()), Err)
    })
}

/// Releases a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pu_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping_follows_the_error_kind() {
        let e = Error::IndexExhausted {
            min_degree: 3,
            max_p: 2,
        };
        assert_eq!(status_of(&e), PuStatus::IndexExhausted);
        let wrapped = Error::Step {
            index: 1,
            source: Box::new(Error::FitFailed {
                degree: 4,
                residual: 1.0,
                bound: 0.1,
            }),
        };
        assert_eq!(status_of(&wrapped), PuStatus::FitFailed);
        assert_eq!(status_of(&Error::EmptySpec), PuStatus::InvalidInput);
        assert_eq!(status_of(&Error::DegenerateDenominator(0.0)), PuStatus::Numerical);
    }

    #[test]
    fn panics_become_a_status() {
        assert_eq!(guard(|| panic!("boom")), PuStatus::Panic);
        let msg = unsafe { CStr::from_ptr(pu_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "panic: boom");
        assert_eq!(guard(|| Ok(())), PuStatus::Ok);
        assert!(pu_last_error_message().is_null());
    }
}
