//! C ABI for the threshold engine.
//!
//! Handles are opaque pointers created and destroyed by this library;
//! every fallible call returns an [`SsapStatus`] and writes results through
//! out-pointers. Threshold sentinels cross the boundary as IEEE infinities.
//!
//! All handle-taking functions are `unsafe`: the caller owns the usual FFI
//! contract that handles originate from this library, are not dangling,
//! and out-pointers are writable. Null pointers are detected and reported.
//!
//! The header is generated into `include/ssap.h` at build time.

use std::ffi::c_char;
use std::sync::Arc;

use ssap::distributions::{CmpPrior, EmpiricalPrior, PoissonPrior, Prior, UniformPrior};
use ssap::policies::PolicyError;
use ssap::thresholds::{
    compute_thresholds, decide, run_online, DeployAction, DeploymentState, SsapError,
    ThresholdTable,
};

/// Status codes for every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SsapStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A distribution parameter was out of range.
    InvalidParameter = 2,
    /// The normalization series diverges (nu = 0 requires lambda < 1).
    DivergentSeries = 3,
    /// Robots/stages combination is infeasible.
    Infeasible = 4,
    /// Query indices fall outside the stored table window.
    OutOfRange = 5,
    /// Sequence length does not match the table.
    BadSequenceLength = 6,
}

impl From<&SsapError> for SsapStatus {
    fn from(e: &SsapError) -> Self {
        match e {
            SsapError::InfeasibleConfig { .. } | SsapError::InfeasibleQuery { .. } => {
                SsapStatus::Infeasible
            }
            SsapError::OutOfRange { .. } => SsapStatus::OutOfRange,
            SsapError::SequenceLength { .. } => SsapStatus::BadSequenceLength,
        }
    }
}

impl From<&PolicyError> for SsapStatus {
    fn from(e: &PolicyError) -> Self {
        match e {
            PolicyError::Infeasible { .. } => SsapStatus::Infeasible,
            PolicyError::Threshold(t) => SsapStatus::from(t),
            _ => SsapStatus::InvalidParameter,
        }
    }
}

/// Opaque prior-distribution handle.
pub struct SsapPrior {
    inner: Arc<dyn Prior>,
}

/// Opaque threshold-table handle.
pub struct SsapThresholds {
    inner: Arc<ThresholdTable>,
}

/// Opaque online-executor handle: a table plus mutable deployment state.
pub struct SsapExecutor {
    table: Arc<ThresholdTable>,
    state: DeploymentState,
}

/// Library version as a NUL-terminated static string.
#[no_mangle]
pub extern "C" fn ssap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

unsafe fn emit_prior(prior: Arc<dyn Prior>, out: *mut *mut SsapPrior) -> SsapStatus {
    *out = Box::into_raw(Box::new(SsapPrior { inner: prior }));
    SsapStatus::Ok
}

/// Create a Poisson prior. Writes a handle the caller must release with
/// `ssap_prior_free`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ssap_prior_new_poisson(
    lambda: f64,
    out: *mut *mut SsapPrior,
) -> SsapStatus {
    if out.is_null() {
        return SsapStatus::NullArgument;
    }
    match PoissonPrior::new(lambda) {
        Ok(p) => emit_prior(Arc::new(p), out),
        Err(_) => SsapStatus::InvalidParameter,
    }
}

/// Create a Conway-Maxwell-Poisson prior.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ssap_prior_new_cmp(
    lambda: f64,
    nu: f64,
    out: *mut *mut SsapPrior,
) -> SsapStatus {
    if out.is_null() {
        return SsapStatus::NullArgument;
    }
    match CmpPrior::new(lambda, nu) {
        Ok(p) => emit_prior(Arc::new(p), out),
        Err(ssap::distributions::DistError::DivergentSeries { .. }) => SsapStatus::DivergentSeries,
        Err(_) => SsapStatus::InvalidParameter,
    }
}

/// Create a continuous uniform prior on [lo, hi].
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ssap_prior_new_uniform(
    lo: f64,
    hi: f64,
    out: *mut *mut SsapPrior,
) -> SsapStatus {
    if out.is_null() {
        return SsapStatus::NullArgument;
    }
    match UniformPrior::new(lo, hi) {
        Ok(p) => emit_prior(Arc::new(p), out),
        Err(_) => SsapStatus::InvalidParameter,
    }
}

/// Create a histogram prior from parallel value/count arrays of length
/// `len`.
///
/// # Safety
/// `values` and `counts` must point to `len` readable elements; `out` must
/// be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ssap_prior_new_histogram(
    values: *const i64,
    counts: *const u64,
    len: usize,
    out: *mut *mut SsapPrior,
) -> SsapStatus {
    if values.is_null() || counts.is_null() || out.is_null() {
        return SsapStatus::NullArgument;
    }
    let values = std::slice::from_raw_parts(values, len);
    let counts = std::slice::from_raw_parts(counts, len);
    match EmpiricalPrior::from_counts(values.iter().copied().zip(counts.iter().copied())) {
        Ok(p) => emit_prior(Arc::new(p), out),
        Err(_) => SsapStatus::InvalidParameter,
    }
}

/// Mean of the prior.
///
/// # Safety
/// `prior` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssap_prior_mean(prior: *const SsapPrior, out: *mut f64) -> SsapStatus {
    if prior.is_null() || out.is_null() {
        return SsapStatus::NullArgument;
    }
    *out = (*prior).inner.mean();
    SsapStatus::Ok
}

/// Release a prior handle. Null is a no-op.
///
/// # Safety
/// `prior` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ssap_prior_free(prior: *mut SsapPrior) {
    if !prior.is_null() {
        drop(Box::from_raw(prior));
    }
}

/// Compute the threshold table for `stages` decision points and `robots`
/// deployments.
///
/// # Safety
/// `prior` must be a live handle from this library; `out` must be null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ssap_thresholds_new(
    prior: *const SsapPrior,
    stages: usize,
    robots: usize,
    out: *mut *mut SsapThresholds,
) -> SsapStatus {
    if prior.is_null() || out.is_null() {
        return SsapStatus::NullArgument;
    }
    let prior = &(*prior).inner;
    match compute_thresholds(prior.as_ref(), stages, robots) {
        Ok(table) => {
            *out = Box::into_raw(Box::new(SsapThresholds {
                inner: Arc::new(table),
            }));
            SsapStatus::Ok
        }
        Err(e) => SsapStatus::from(&e),
    }
}

/// Number of stages, or 0 for a null handle.
///
/// # Safety
/// `table` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ssap_thresholds_stages(table: *const SsapThresholds) -> usize {
    if table.is_null() {
        return 0;
    }
    (*table).inner.n_stages()
}

/// Number of deployments, or 0 for a null handle.
///
/// # Safety
/// `table` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ssap_thresholds_robots(table: *const SsapThresholds) -> usize {
    if table.is_null() {
        return 0;
    }
    (*table).inner.n_robots()
}

/// Threshold a_{i,n}; sentinels map to -INFINITY / +INFINITY.
///
/// # Safety
/// `table` must be a live handle from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssap_thresholds_get(
    table: *const SsapThresholds,
    n: usize,
    i: usize,
    out: *mut f64,
) -> SsapStatus {
    if table.is_null() || out.is_null() {
        return SsapStatus::NullArgument;
    }
    match (*table).inner.threshold(n, i) {
        Some(b) => {
            *out = b.as_f64();
            SsapStatus::Ok
        }
        None => SsapStatus::OutOfRange,
    }
}

/// Deploy/hold query with `n_remaining` stages and `r_remaining` robots
/// left. Writes true into `out_deploy` on deploy and the cutoff used into
/// `out_threshold` (may be an infinity).
///
/// # Safety
/// `table` must be a live handle from this library; out-pointers must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ssap_decide(
    table: *const SsapThresholds,
    n_remaining: usize,
    r_remaining: usize,
    x: f64,
    out_deploy: *mut bool,
    out_threshold: *mut f64,
) -> SsapStatus {
    if table.is_null() || out_deploy.is_null() || out_threshold.is_null() {
        return SsapStatus::NullArgument;
    }
    match decide(&(*table).inner, n_remaining, r_remaining, x) {
        Ok(d) => {
            *out_deploy = d.action == DeployAction::Deploy;
            *out_threshold = d.threshold_used.as_f64();
            SsapStatus::Ok
        }
        Err(e) => SsapStatus::from(&e),
    }
}

/// Run the policy over a full sequence of length `len` (must equal the
/// table's stage count). Writes the 1-based deployment indices into
/// `out_indices`, which must hold `ssap_thresholds_robots(table)` entries,
/// and the summed reward into `out_total`.
///
/// # Safety
/// `table` must be a live handle from this library, `sequence` must point
/// to `len` readable doubles, `out_indices` to a writable buffer of at
/// least the table's robot count, and `out_total` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssap_run_online(
    table: *const SsapThresholds,
    sequence: *const f64,
    len: usize,
    out_indices: *mut usize,
    out_total: *mut f64,
) -> SsapStatus {
    if table.is_null() || sequence.is_null() || out_indices.is_null() || out_total.is_null() {
        return SsapStatus::NullArgument;
    }
    let inner = &(*table).inner;
    let seq = std::slice::from_raw_parts(sequence, len);
    match run_online(inner, seq) {
        Ok((indices, total)) => {
            let out = std::slice::from_raw_parts_mut(out_indices, inner.n_robots());
            out.copy_from_slice(&indices);
            *out_total = total;
            SsapStatus::Ok
        }
        Err(e) => SsapStatus::from(&e),
    }
}

/// Release a threshold-table handle. Null is a no-op.
///
/// # Safety
/// `table` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ssap_thresholds_free(table: *mut SsapThresholds) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Create an online executor bound to a table, starting at stage 1 with
/// all robots aboard.
///
/// # Safety
/// `table` must be a live handle from this library; `out` must be null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ssap_executor_new(
    table: *const SsapThresholds,
    out: *mut *mut SsapExecutor,
) -> SsapStatus {
    if table.is_null() || out.is_null() {
        return SsapStatus::NullArgument;
    }
    let inner = Arc::clone(&(*table).inner);
    let state = DeploymentState::new(&inner);
    *out = Box::into_raw(Box::new(SsapExecutor { table: inner, state }));
    SsapStatus::Ok
}

/// Feed the next observation. Writes true into `out_deploy` when a robot
/// goes out at this stage.
///
/// # Safety
/// `exec` must be a live handle from this library with exclusive access;
/// `out_deploy` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssap_executor_step(
    exec: *mut SsapExecutor,
    x: f64,
    out_deploy: *mut bool,
) -> SsapStatus {
    if exec.is_null() || out_deploy.is_null() {
        return SsapStatus::NullArgument;
    }
    let exec = &mut *exec;
    match exec.state.step(&exec.table, x) {
        Ok(d) => {
            *out_deploy = d.action == DeployAction::Deploy;
            SsapStatus::Ok
        }
        Err(e) => SsapStatus::from(&e),
    }
}

/// Robots not yet deployed, or 0 for a null handle.
///
/// # Safety
/// `exec` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ssap_executor_robots_remaining(exec: *const SsapExecutor) -> usize {
    if exec.is_null() {
        return 0;
    }
    (*exec).state.robots_remaining()
}

/// Sum of rewards collected so far.
///
/// # Safety
/// `exec` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ssap_executor_total_reward(exec: *const SsapExecutor) -> f64 {
    if exec.is_null() {
        return 0.0;
    }
    (*exec).state.total_reward()
}

/// Release an executor handle. Null is a no-op.
///
/// # Safety
/// `exec` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ssap_executor_free(exec: *mut SsapExecutor) {
    if !exec.is_null() {
        drop(Box::from_raw(exec));
    }
}
