//! C ABI over the `rtea` crate.
//!
//! Configurations and results are opaque heap handles created and released
//! through this interface. Every entry point returns an [`RteaStatus`]; on
//! failure [`rtea_last_error_message`] describes the cause for the calling
//! thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use rtea::paramselect::{default_config, estimate_sigma, PeriodSpec, Tuning};
use rtea::solver::{check_convexity, pogs_solve, rtea_solve, Init, PogsConfig};
use rtea::{DecompositionResult, Error, PenaltyFamily, PenaltySpec};

/// Status codes returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RteaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    InvalidInput = 3,
    Unsupported = 4,
    InvalidPeriod = 5,
    Numerical = 6,
    Io = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RteaPenalty {
    Abs = 0,
    Log = 1,
    Rat = 2,
    Atan = 3,
}

impl From<RteaPenalty> for PenaltyFamily {
    fn from(p: RteaPenalty) -> Self {
        match p {
            RteaPenalty::Abs => PenaltyFamily::Abs,
            RteaPenalty::Log => PenaltyFamily::Log,
            RteaPenalty::Rat => PenaltyFamily::Rat,
            RteaPenalty::Atan => PenaltyFamily::Atan,
        }
    }
}

/// Parameters a configuration resolves to for a given signal.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RteaParams {
    pub sigma: f64,
    pub lam0: f64,
    pub lam1: f64,
    pub lam2: f64,
    pub a0: f64,
    /// `1 / (k0 lam0)`; `a0` stays below it.
    pub convexity_bound: f64,
    pub k0: usize,
}

/// Opaque extraction settings.
pub struct RteaConfig {
    spec1: PeriodSpec,
    spec2: PeriodSpec,
    tuning: Tuning,
}

/// Opaque extraction output.
pub struct RteaResult {
    inner: DecompositionResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> RteaStatus {
    match err {
        Error::InvalidParameter(_) => RteaStatus::InvalidParameter,
        Error::InvalidInput(_) => RteaStatus::InvalidInput,
        Error::Unsupported(_) => RteaStatus::Unsupported,
        Error::InvalidPeriod(_) => RteaStatus::InvalidPeriod,
        Error::Numerical(_) => RteaStatus::Numerical,
        Error::Io { .. } | Error::Format { .. } => RteaStatus::Io,
    }
}

struct Fail(RteaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(RteaStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RteaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RteaStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            RteaStatus::Panic
        }
    }
}

unsafe fn signal<'a>(y: *const f64, len: usize) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if y.is_null() {
        return Err(null("signal pointer"));
    }
    Ok(slice::from_raw_parts(y, len))
}

unsafe fn config_ref<'a>(cfg: *const RteaConfig) -> Result<&'a RteaConfig, Fail> {
    cfg.as_ref().ok_or_else(|| null("config"))
}

unsafe fn config_mut<'a>(cfg: *mut RteaConfig) -> Result<&'a mut RteaConfig, Fail> {
    cfg.as_mut().ok_or_else(|| null("config"))
}

unsafe fn result_ref<'a>(res: *const RteaResult) -> Result<&'a RteaResult, Fail> {
    res.as_ref().ok_or_else(|| null("result"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn rtea_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rtea_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a configuration from the two fault periods in samples with group
/// shape `n1` x `m` (both in 1..=4). Defaults: eta 0.5, a0 fraction 0.5,
/// atan coupling penalty, MAD noise estimate, 200 iterations, tol 1e-8.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn rtea_config_from_periods(
    t1: f64,
    t2: f64,
    n1: usize,
    m: usize,
    out: *mut *mut RteaConfig,
) -> RteaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let cfg = RteaConfig {
            spec1: PeriodSpec::from_samples(t1, n1, m),
            spec2: PeriodSpec::from_samples(t2, n1, m),
            tuning: Tuning::default(),
        };
        rtea::paramselect::build_weight_array(&cfg.spec1)?;
        rtea::paramselect::build_weight_array(&cfg.spec2)?;
        rtea::paramselect::beta_lookup(n1, m)?;
        out.write(Box::into_raw(Box::new(cfg)));
        Ok(())
    })
}

/// Sets the coupling share `eta` in (0, 1), the non-convexity as a fraction
/// of the convexity bound in [0, 1), and the coupling penalty family.
///
/// # Safety
/// `cfg` must come from [`rtea_config_from_periods`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn rtea_config_set_tuning(
    cfg: *mut RteaConfig,
    eta: f64,
    a0_fraction: f64,
    penalty: RteaPenalty,
) -> RteaStatus {
    guard(|| {
        let cfg = config_mut(cfg)?;
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Fail(
                RteaStatus::InvalidParameter,
                format!("eta must lie in (0, 1), got {eta}"),
            ));
        }
        if !(0.0..1.0).contains(&a0_fraction) {
            return Err(Fail(
                RteaStatus::InvalidParameter,
                format!("a0_fraction must lie in [0, 1), got {a0_fraction}"),
            ));
        }
        cfg.tuning.eta = eta;
        cfg.tuning.a0_fraction = a0_fraction;
        cfg.tuning.penalty = penalty.into();
        Ok(())
    })
}

/// Fixes the noise level. A value of 0 restores the MAD estimate.
///
/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn rtea_config_set_sigma(cfg: *mut RteaConfig, sigma: f64) -> RteaStatus {
    guard(|| {
        let cfg = config_mut(cfg)?;
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Fail(
                RteaStatus::InvalidParameter,
                format!("sigma must be finite and >= 0, got {sigma}"),
            ));
        }
        cfg.tuning.sigma = (sigma > 0.0).then_some(sigma);
        Ok(())
    })
}

/// Sets the iteration cap and the relative cost-change tolerance.
///
/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn rtea_config_set_stop(
    cfg: *mut RteaConfig,
    max_iter: usize,
    tol: f64,
) -> RteaStatus {
    guard(|| {
        let cfg = config_mut(cfg)?;
        if max_iter == 0 || !(tol > 0.0) {
            return Err(Fail(
                RteaStatus::InvalidParameter,
                format!("need max_iter >= 1 and tol > 0, got {max_iter} and {tol}"),
            ));
        }
        cfg.tuning.max_iter = max_iter;
        cfg.tuning.tol = tol;
        Ok(())
    })
}

/// Resolves the regularization parameters the configuration would use on
/// `y`.
///
/// # Safety
/// `y` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rtea_config_params(
    cfg: *const RteaConfig,
    y: *const f64,
    len: usize,
    out: *mut RteaParams,
) -> RteaStatus {
    guard(|| {
        let cfg = config_ref(cfg)?;
        let y = signal(y, len)?;
        let sel = default_config(y, &cfg.spec1, &cfg.spec2, &cfg.tuning)?;
        write_out(
            out,
            RteaParams {
                sigma: sel.sigma,
                lam0: sel.config.lam0,
                lam1: sel.config.lam1,
                lam2: sel.config.lam2,
                a0: sel.config.pen0.a(),
                convexity_bound: sel.convexity_bound,
                k0: sel.config.k0,
            },
        )
    })
}

/// Releases a configuration. Null is ignored.
///
/// # Safety
/// `cfg` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rtea_config_free(cfg: *mut RteaConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Splits `y` into two periodic transient components.
///
/// # Safety
/// `y` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rtea_solve_signal(
    cfg: *const RteaConfig,
    y: *const f64,
    len: usize,
    out: *mut *mut RteaResult,
) -> RteaStatus {
    guard(|| {
        let cfg = config_ref(cfg)?;
        let y = signal(y, len)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let sel = default_config(y, &cfg.spec1, &cfg.spec2, &cfg.tuning)?;
        let inner = rtea_solve(y, &sel.config, Init::Observation)?;
        out.write(Box::into_raw(Box::new(RteaResult { inner })));
        Ok(())
    })
}

/// Releases a result. Null is ignored.
///
/// # Safety
/// `res` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rtea_result_free(res: *mut RteaResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Signal length of a result.
///
/// # Safety
/// `res` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn rtea_result_len(res: *const RteaResult, out: *mut usize) -> RteaStatus {
    guard(|| write_out(out, result_ref(res)?.inner.x1.len()))
}

/// Iterations run, whether the tolerance was met, and the final cost.
///
/// # Safety
/// `res` must be a live result handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn rtea_result_stats(
    res: *const RteaResult,
    iterations: *mut usize,
    converged: *mut bool,
    final_cost: *mut f64,
) -> RteaStatus {
    guard(|| {
        let r = &result_ref(res)?.inner;
        write_out(iterations, r.iterations)?;
        write_out(converged, r.converged)?;
        write_out(final_cost, r.final_cost())
    })
}

/// Which array [`rtea_result_copy`] reads.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RteaField {
    X1 = 0,
    X2 = 1,
    Residual = 2,
    /// Cost before the first iteration, then after each one.
    CostHistory = 3,
}

/// Copies one output array into `buf`, whose capacity is `cap` doubles.
/// `written` receives the array length; if `cap` is smaller, nothing is
/// copied and the status is `RTEA_STATUS_BUFFER_TOO_SMALL`.
///
/// # Safety
/// `buf` must be writable for `cap` doubles; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rtea_result_copy(
    res: *const RteaResult,
    field: RteaField,
    buf: *mut f64,
    cap: usize,
    written: *mut usize,
) -> RteaStatus {
    guard(|| {
        let r = &result_ref(res)?.inner;
        let src = match field {
            RteaField::X1 => &r.x1,
            RteaField::X2 => &r.x2,
            RteaField::Residual => &r.residual,
            RteaField::CostHistory => &r.cost_history,
        };
        write_out(written, src.len())?;
        if cap < src.len() {
            return Err(Fail(
                RteaStatus::BufferTooSmall,
                format!("buffer holds {cap} values, need {}", src.len()),
            ));
        }
        if !src.is_empty() {
            if buf.is_null() {
                return Err(null("buffer"));
            }
            ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
        }
        Ok(())
    })
}

/// Robust noise level `median(|y - median(y)|) / 0.6745`.
///
/// # Safety
/// `y` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rtea_estimate_sigma(
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> RteaStatus {
    guard(|| {
        let y = signal(y, len)?;
        write_out(out, estimate_sigma(y)?.sigma)
    })
}

/// Reports whether `a0 < 1 / (k0 lam0)` and the bound itself.
///
/// # Safety
/// `valid` and `bound` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rtea_check_convexity(
    k0: usize,
    lam0: f64,
    a0: f64,
    valid: *mut bool,
    bound: *mut f64,
) -> RteaStatus {
    guard(|| {
        let c = check_convexity(k0, lam0, a0)?;
        write_out(valid, c.valid)?;
        write_out(bound, c.bound)
    })
}

/// Single-component periodic group denoising with convex abs penalty.
/// `lam <= 0` selects `beta(n1, m)` times the MAD noise estimate. Writes
/// `len` doubles to `out`.
///
/// # Safety
/// `y` must point to `len` doubles and `out` must be writable for `len`.
#[no_mangle]
pub unsafe extern "C" fn rtea_pogs_denoise(
    y: *const f64,
    len: usize,
    period: f64,
    n1: usize,
    m: usize,
    lam: f64,
    max_iter: usize,
    out: *mut f64,
) -> RteaStatus {
    guard(|| {
        let y = signal(y, len)?;
        if out.is_null() && len > 0 {
            return Err(null("output buffer"));
        }
        let spec = PeriodSpec::from_samples(period, n1, m);
        let b = rtea::paramselect::build_weight_array(&spec)?;
        let lam = if lam > 0.0 {
            lam
        } else {
            rtea::paramselect::beta_lookup(n1, m)? * estimate_sigma(y)?.sigma
        };
        let mut cfg = PogsConfig::new(b, lam, PenaltySpec::abs());
        if max_iter > 0 {
            cfg.max_iter = max_iter;
        }
        let res = pogs_solve(y, &cfg)?;
        if len > 0 {
            ptr::copy_nonoverlapping(res.x.as_ptr(), out, len);
        }
        Ok(())
    })
}
