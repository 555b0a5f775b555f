//! C ABI for the rklgof library: opaque scheme handles, flat data buffers,
//! and integer status codes (0 ok, 2 invalid input, 3 numeric failure —
//! the same convention as the CLI exit codes).
//!
//! Strings returned by this library are owned by the caller and must be
//! released with [`rklgof_string_free`]. The per-thread message from
//! [`rklgof_last_error_message`] is valid until the next failing call on the
//! same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rklgof::censoring::{CensoringScheme, ProgressiveSample};
use rklgof::gof::{renyi_test_statistic, shannon_test_statistic, StatisticKind};
use rklgof::mc::{self, McConfig};
use rklgof::Error;

/// Opaque censoring-scheme handle.
pub struct RklgofScheme {
    inner: CensoringScheme,
}

/// Status codes shared with the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum RklgofStatus {
    Ok = 0,
    /// Bad arguments, malformed data, scheme violations.
    InvalidInput = 2,
    /// Numerical failure (cancellation, non-convergence, failed replicates).
    NumericError = 3,
}

/// Statistic selector.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum RklgofStatistic {
    Renyi = 0,
    Shannon = 1,
}

impl RklgofStatistic {
    fn kind(self) -> StatisticKind {
        match self {
            RklgofStatistic::Renyi => StatisticKind::RenyiRkl,
            RklgofStatistic::Shannon => StatisticKind::ShannonKl,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error message").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> RklgofStatus {
    if err.is_numeric() {
        RklgofStatus::NumericError
    } else {
        RklgofStatus::InvalidInput
    }
}

fn fail(err: Error) -> RklgofStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

fn guard<F: FnOnce() -> RklgofStatus>(f: F) -> RklgofStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".into());
            RklgofStatus::NumericError
        }
    }
}

/// Message for the most recent failure on this thread, or NULL if none.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn rklgof_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse a scheme literal like "n=19 m=8 R=0,0,3,0,3,0,0,5".
/// Returns NULL on error (see [`rklgof_last_error_message`]).
///
/// # Safety
/// `literal` must be a valid NUL-terminated C string.
#[no_mangle]
pub unsafe extern "C" fn rklgof_scheme_parse(literal: *const c_char) -> *mut RklgofScheme {
    if literal.is_null() {
        set_error("literal is NULL".into());
        return ptr::null_mut();
    }
    let text = match CStr::from_ptr(literal).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("literal is not valid UTF-8".into());
            return ptr::null_mut();
        }
    };
    match text.parse::<CensoringScheme>() {
        Ok(inner) => Box::into_raw(Box::new(RklgofScheme { inner })),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// Build a scheme from raw fields. Returns NULL on error.
///
/// # Safety
/// `removals` must point to `m` readable uint32 values.
#[no_mangle]
pub unsafe extern "C" fn rklgof_scheme_new(
    n: u32,
    m: u32,
    removals: *const u32,
) -> *mut RklgofScheme {
    if removals.is_null() {
        set_error("removals is NULL".into());
        return ptr::null_mut();
    }
    let r: Vec<usize> =
        std::slice::from_raw_parts(removals, m as usize).iter().map(|&v| v as usize).collect();
    match CensoringScheme::new(n as usize, m as usize, r) {
        Ok(inner) => Box::into_raw(Box::new(RklgofScheme { inner })),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `scheme` must be a pointer from `rklgof_scheme_parse`/`rklgof_scheme_new`
/// that has not been freed, or NULL (a no-op).
#[no_mangle]
pub unsafe extern "C" fn rklgof_scheme_free(scheme: *mut RklgofScheme) {
    if !scheme.is_null() {
        drop(Box::from_raw(scheme));
    }
}

/// Units on test `n`; 0 if `scheme` is NULL.
///
/// # Safety
/// `scheme` must be a live scheme handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn rklgof_scheme_n(scheme: *const RklgofScheme) -> u32 {
    scheme.as_ref().map_or(0, |s| s.inner.n() as u32)
}

/// Observed failures `m`; 0 if `scheme` is NULL.
///
/// # Safety
/// `scheme` must be a live scheme handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn rklgof_scheme_m(scheme: *const RklgofScheme) -> u32 {
    scheme.as_ref().map_or(0, |s| s.inner.m() as u32)
}

unsafe fn sample_from_raw(
    scheme: &CensoringScheme,
    data: *const f64,
    len: usize,
) -> Result<ProgressiveSample, Error> {
    if data.is_null() {
        return Err(Error::InvalidData("data is NULL".into()));
    }
    let xs = std::slice::from_raw_parts(data, len).to_vec();
    ProgressiveSample::new(scheme.clone(), xs)
}

/// Compute a test statistic on `len` strictly increasing observations.
/// `alpha` is ignored for the Shannon statistic. On success writes the value
/// to `out_value` and the fitted exponential scale to `out_theta_hat`
/// (either may be NULL to skip).
///
/// # Safety
/// `scheme` must be a live handle; `data` must point to `len` readable
/// doubles; out-pointers must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn rklgof_statistic(
    scheme: *const RklgofScheme,
    data: *const f64,
    len: usize,
    kind: RklgofStatistic,
    alpha: f64,
    w: u32,
    out_value: *mut f64,
    out_theta_hat: *mut f64,
) -> RklgofStatus {
    let Some(scheme) = scheme.as_ref() else {
        set_error("scheme is NULL".into());
        return RklgofStatus::InvalidInput;
    };
    guard(|| {
        let sample = match sample_from_raw(&scheme.inner, data, len) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let result = match kind {
            RklgofStatistic::Renyi => renyi_test_statistic(&sample, alpha, w as usize),
            RklgofStatistic::Shannon => shannon_test_statistic(&sample, w as usize),
        };
        match result {
            Ok(stat) => {
                if !out_value.is_null() {
                    *out_value = stat.value;
                }
                if !out_theta_hat.is_null() {
                    *out_theta_hat = stat.theta_hat.unwrap_or(f64::NAN);
                }
                RklgofStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

fn alpha_for(kind: RklgofStatistic, alpha: f64) -> Option<f64> {
    match kind {
        RklgofStatistic::Renyi => Some(alpha),
        RklgofStatistic::Shannon => None,
    }
}

/// Simulated critical value at `level` (upper tail) over `reps` replicates.
///
/// # Safety
/// `scheme` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rklgof_critical_value(
    scheme: *const RklgofScheme,
    kind: RklgofStatistic,
    alpha: f64,
    w: u32,
    level: f64,
    reps: u64,
    seed: u64,
    workers: u32,
    out: *mut f64,
) -> RklgofStatus {
    let Some(scheme) = scheme.as_ref() else {
        set_error("scheme is NULL".into());
        return RklgofStatus::InvalidInput;
    };
    if out.is_null() {
        set_error("out is NULL".into());
        return RklgofStatus::InvalidInput;
    }
    guard(|| {
        let cfg = McConfig { reps: reps as usize, seed, level, workers: workers as usize };
        match mc::critical_value(&scheme.inner, kind.kind(), alpha_for(kind, alpha), w as usize, &cfg, None)
        {
            Ok(v) => {
                *out = v;
                RklgofStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Monte Carlo p-value P(statistic > observed | exponential null).
///
/// # Safety
/// `scheme` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rklgof_p_value(
    scheme: *const RklgofScheme,
    observed: f64,
    kind: RklgofStatistic,
    alpha: f64,
    w: u32,
    reps: u64,
    seed: u64,
    workers: u32,
    out: *mut f64,
) -> RklgofStatus {
    let Some(scheme) = scheme.as_ref() else {
        set_error("scheme is NULL".into());
        return RklgofStatus::InvalidInput;
    };
    if out.is_null() {
        set_error("out is NULL".into());
        return RklgofStatus::InvalidInput;
    }
    guard(|| {
        let cfg = McConfig { reps: reps as usize, seed, level: 0.10, workers: workers as usize };
        match mc::p_value(observed, &scheme.inner, kind.kind(), alpha_for(kind, alpha), w as usize, &cfg) {
            Ok(v) => {
                *out = v;
                RklgofStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Window from {1, ..., m-1} minimizing the simulated critical value.
///
/// # Safety
/// `scheme` must be a live handle; `out_w` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rklgof_select_window(
    scheme: *const RklgofScheme,
    kind: RklgofStatistic,
    alpha: f64,
    level: f64,
    reps: u64,
    seed: u64,
    workers: u32,
    out_w: *mut u32,
) -> RklgofStatus {
    let Some(scheme) = scheme.as_ref() else {
        set_error("scheme is NULL".into());
        return RklgofStatus::InvalidInput;
    };
    if out_w.is_null() {
        set_error("out_w is NULL".into());
        return RklgofStatus::InvalidInput;
    }
    guard(|| {
        let cfg = McConfig { reps: reps as usize, seed, level, workers: workers as usize };
        let candidates: Vec<usize> = (1..scheme.inner.m()).collect();
        match mc::select_window(&scheme.inner, kind.kind(), alpha_for(kind, alpha), &cfg, &candidates) {
            Ok(w) => {
                *out_w = w as u32;
                RklgofStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Run the full test pipeline on a data buffer and return the JSON report
/// (NULL on error). `w = 0` selects the window automatically. The returned
/// string must be freed with [`rklgof_string_free`].
///
/// # Safety
/// `scheme` must be a live handle; `data` must point to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn rklgof_test_report_json(
    scheme: *const RklgofScheme,
    data: *const f64,
    len: usize,
    kind: RklgofStatistic,
    alpha: f64,
    w: u32,
    level: f64,
    reps: u64,
    seed: u64,
    workers: u32,
) -> *mut c_char {
    let Some(scheme) = scheme.as_ref() else {
        set_error("scheme is NULL".into());
        return ptr::null_mut();
    };
    if data.is_null() {
        set_error("data is NULL".into());
        return ptr::null_mut();
    }
    let result = catch_unwind(AssertUnwindSafe(|| {
        let xs = std::slice::from_raw_parts(data, len).to_vec();
        build_report(&scheme.inner, xs, kind, alpha, w, level, reps, seed, workers)
    }));
    match result {
        Ok(Ok(json)) => match CString::new(json) {
            Ok(c) => c.into_raw(),
            Err(_) => {
                set_error("report contained NUL".into());
                ptr::null_mut()
            }
        },
        Ok(Err(e)) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
        Err(_) => {
            set_error("internal panic".into());
            ptr::null_mut()
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn build_report(
    scheme: &CensoringScheme,
    xs: Vec<f64>,
    kind: RklgofStatistic,
    alpha: f64,
    w: u32,
    level: f64,
    reps: u64,
    seed: u64,
    workers: u32,
) -> Result<String, Error> {
    use rklgof::report::{level_key, sha256_hex, DataEcho, SchemeEcho, StatBlock, TestReport};

    let raw: Vec<u8> = xs.iter().flat_map(|v| v.to_le_bytes()).collect();
    let sample = ProgressiveSample::new(scheme.clone(), xs)?;
    let cfg = McConfig { reps: reps as usize, seed, level, workers: workers as usize };
    let a = alpha_for(kind, alpha);
    let (w, w_auto) = if w == 0 {
        let candidates: Vec<usize> = (1..scheme.m()).collect();
        (mc::select_window(scheme, kind.kind(), a, &cfg, &candidates)?, true)
    } else {
        (w as usize, false)
    };
    let stat = match kind {
        RklgofStatistic::Renyi => renyi_test_statistic(&sample, alpha, w)?,
        RklgofStatistic::Shannon => shannon_test_statistic(&sample, w)?,
    };
    let crit = mc::critical_value(scheme, kind.kind(), a, w, &cfg, None)?;
    let p = mc::p_value(stat.value, scheme, kind.kind(), a, w, &cfg)?;
    let mut critical_values = std::collections::BTreeMap::new();
    let mut reject = std::collections::BTreeMap::new();
    critical_values.insert(level_key(level), crit);
    reject.insert(level_key(level), stat.value > crit);
    let report = TestReport {
        scheme: SchemeEcho {
            n: scheme.n(),
            m: scheme.m(),
            removals: scheme.removals().to_vec(),
            literal: scheme.to_string(),
        },
        data: DataEcho {
            path: "<buffer>".into(),
            sha256: sha256_hex(&raw),
            observations: scheme.m(),
        },
        reps: cfg.reps,
        seed,
        workers: cfg.workers,
        statistics: vec![StatBlock {
            kind: kind.kind(),
            alpha: a,
            w,
            w_auto,
            value: stat.value,
            theta_hat: stat.theta_hat.unwrap_or(f64::NAN),
            critical_values,
            p_value: p,
            reject,
        }],
        generated_at: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    Ok(serde_json::to_string_pretty(&report)?)
}

/// Free a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rklgof_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
