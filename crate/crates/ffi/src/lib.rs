//! C ABI for the odebench solver toolkit.
//!
//! Problems and trajectories cross the boundary as opaque handles; every
//! fallible call returns an [`OdebenchCode`] and writes results through out
//! pointers. The right-hand side is a C function pointer receiving an
//! arbitrary `user_data` pointer. The header is generated into
//! `include/odebench.h` by the build script.

use std::os::raw::c_void;

use odebench::adaptive::{integrate_adaptive, AdaptiveConfig};
use odebench::driver::integrate_fixed;
use odebench::problem::{FixedStepConfig, IvpProblem, Rhs, Trajectory, TrajectoryStatus};
use odebench::steppers::OneStepMethod;
use odebench::truncation::estimate_local_truncation_error;

/// `f(x, y, user_data) -> dy/dx`. Must be deterministic and never touch
/// toolkit state. Nullable; null is rejected with
/// [`OdebenchCode::NullPointer`].
pub type OdebenchRhsFn =
    Option<unsafe extern "C" fn(x: f64, y: f64, user_data: *mut c_void) -> f64>;

struct CallbackRhs {
    callback: unsafe extern "C" fn(x: f64, y: f64, user_data: *mut c_void) -> f64,
    user_data: *mut c_void,
}

impl Rhs for CallbackRhs {
    fn eval(&self, x: f64, y: f64) -> f64 {
        unsafe { (self.callback)(x, y, self.user_data) }
    }
}

/// An initial value problem behind an opaque handle.
pub struct OdebenchProblem {
    inner: IvpProblem<CallbackRhs>,
}

/// An integration result behind an opaque handle.
pub struct OdebenchTrajectory {
    inner: Trajectory,
}

/// Status of an odebench call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum OdebenchCode {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Step size or tolerance settings violate their invariants.
    InvalidConfig = 2,
    /// An rhs evaluation returned NaN or infinity.
    NonFiniteEvaluation = 3,
    /// Index past the end of the trajectory.
    OutOfRange = 4,
}

/// Fixed-step one-step methods.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum OdebenchMethod {
    Euler = 0,
    Heun = 1,
    Midpoint = 2,
    Rk4 = 3,
}

impl OdebenchMethod {
    fn as_method(self) -> OneStepMethod {
        match self {
            OdebenchMethod::Euler => OneStepMethod::Euler,
            OdebenchMethod::Heun => OneStepMethod::Heun,
            OdebenchMethod::Midpoint => OneStepMethod::Midpoint,
            OdebenchMethod::Rk4 => OneStepMethod::Rk4,
        }
    }
}

/// How an integration run ended.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum OdebenchOutcome {
    /// Reached the end of the interval.
    Completed = 0,
    /// Values became non-finite or exceeded the overflow guard.
    BlowUp = 1,
    /// The adaptive controller could not proceed at the minimum step.
    StepUnderflow = 2,
}

/// Adaptive controller settings (mirrors the library defaults).
#[repr(C)]
#[derive(Clone, Copy)]
pub struct OdebenchAdaptiveOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_initial: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub safety: f64,
    pub growth_limit: f64,
    pub shrink_limit: f64,
}

impl OdebenchAdaptiveOptions {
    fn as_config(&self) -> AdaptiveConfig {
        AdaptiveConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            h_initial: self.h_initial,
            h_min: self.h_min,
            h_max: self.h_max,
            safety: self.safety,
            growth_limit: self.growth_limit,
            shrink_limit: self.shrink_limit,
        }
    }
}

/// Default adaptive settings with step bounds sized to an interval length.
#[no_mangle]
pub extern "C" fn odebench_adaptive_defaults(span: f64) -> OdebenchAdaptiveOptions {
    let c = AdaptiveConfig::for_span(span);
    OdebenchAdaptiveOptions {
        rel_tol: c.rel_tol,
        abs_tol: c.abs_tol,
        h_initial: c.h_initial,
        h_min: c.h_min,
        h_max: c.h_max,
        safety: c.safety,
        growth_limit: c.growth_limit,
        shrink_limit: c.shrink_limit,
    }
}

/// Creates a problem handle, or returns null when `rhs` is null, the
/// endpoints are not finite, or the interval is empty. Free with
/// [`odebench_problem_free`].
///
/// # Safety
/// `rhs` must remain callable and `user_data` valid for the handle's
/// lifetime.
#[no_mangle]
pub unsafe extern "C" fn odebench_problem_new(
    rhs: OdebenchRhsFn,
    user_data: *mut c_void,
    x0: f64,
    y0: f64,
    x_end: f64,
) -> *mut OdebenchProblem {
    let Some(callback) = rhs else {
        return std::ptr::null_mut();
    };
    match IvpProblem::new(CallbackRhs { callback, user_data }, x0, y0, x_end) {
        Ok(inner) => Box::into_raw(Box::new(OdebenchProblem { inner })),
        Err(_) => std::ptr::null_mut(),
    }
}

/// # Safety
/// `problem` must be a handle from [`odebench_problem_new`] or null.
#[no_mangle]
pub unsafe extern "C" fn odebench_problem_free(problem: *mut OdebenchProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Integrates with a fixed-step method; on success writes a trajectory
/// handle to `out`. Blow-up is reported through the trajectory's outcome,
/// not as an error code.
///
/// # Safety
/// `problem` must be a live problem handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn odebench_integrate_fixed(
    problem: *const OdebenchProblem,
    method: OdebenchMethod,
    h: f64,
    out: *mut *mut OdebenchTrajectory,
) -> OdebenchCode {
    let (Some(problem), false) = (problem.as_ref(), out.is_null()) else {
        return OdebenchCode::NullPointer;
    };
    match integrate_fixed(&problem.inner, &method.as_method(), &FixedStepConfig::new(h)) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(OdebenchTrajectory { inner }));
            OdebenchCode::Ok
        }
        Err(_) => OdebenchCode::InvalidConfig,
    }
}

/// Integrates with the adaptive Dormand-Prince 5(4) pair.
///
/// # Safety
/// `problem` and `out` must be valid; `options` may be null for defaults
/// sized to the problem's interval.
#[no_mangle]
pub unsafe extern "C" fn odebench_integrate_adaptive(
    problem: *const OdebenchProblem,
    options: *const OdebenchAdaptiveOptions,
    out: *mut *mut OdebenchTrajectory,
) -> OdebenchCode {
    let (Some(problem), false) = (problem.as_ref(), out.is_null()) else {
        return OdebenchCode::NullPointer;
    };
    let config = match options.as_ref() {
        Some(opts) => opts.as_config(),
        None => AdaptiveConfig::for_span(problem.inner.span()),
    };
    match integrate_adaptive(&problem.inner, &config) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(OdebenchTrajectory { inner }));
            OdebenchCode::Ok
        }
        Err(_) => OdebenchCode::InvalidConfig,
    }
}

/// Number of `(x, y)` samples in the trajectory (zero for null).
///
/// # Safety
/// `trajectory` must be a live trajectory handle or null.
#[no_mangle]
pub unsafe extern "C" fn odebench_trajectory_len(trajectory: *const OdebenchTrajectory) -> usize {
    trajectory.as_ref().map_or(0, |t| t.inner.samples.len())
}

/// Copies sample `index` into `x`/`y`.
///
/// # Safety
/// `trajectory` must be a live handle; `x` and `y` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn odebench_trajectory_point(
    trajectory: *const OdebenchTrajectory,
    index: usize,
    x: *mut f64,
    y: *mut f64,
) -> OdebenchCode {
    let Some(t) = trajectory.as_ref() else {
        return OdebenchCode::NullPointer;
    };
    if x.is_null() || y.is_null() {
        return OdebenchCode::NullPointer;
    }
    match t.inner.samples.get(index) {
        Some(&(sx, sy)) => {
            *x = sx;
            *y = sy;
            OdebenchCode::Ok
        }
        None => OdebenchCode::OutOfRange,
    }
}

/// # Safety
/// `trajectory` must be a live trajectory handle.
#[no_mangle]
pub unsafe extern "C" fn odebench_trajectory_outcome(
    trajectory: *const OdebenchTrajectory,
) -> OdebenchOutcome {
    match trajectory.as_ref().map(|t| t.inner.status) {
        Some(TrajectoryStatus::Completed) | None => OdebenchOutcome::Completed,
        Some(TrajectoryStatus::BlowUp { .. }) => OdebenchOutcome::BlowUp,
        Some(TrajectoryStatus::StepUnderflow { .. }) => OdebenchOutcome::StepUnderflow,
    }
}

/// Where a failed run stopped; NaN for completed runs.
///
/// # Safety
/// `trajectory` must be a live trajectory handle.
#[no_mangle]
pub unsafe extern "C" fn odebench_trajectory_x_fail(
    trajectory: *const OdebenchTrajectory,
) -> f64 {
    trajectory
        .as_ref()
        .and_then(|t| t.inner.status.x_fail())
        .unwrap_or(f64::NAN)
}

/// Total rhs evaluations, including rejected adaptive steps.
///
/// # Safety
/// `trajectory` must be a live trajectory handle or null.
#[no_mangle]
pub unsafe extern "C" fn odebench_trajectory_rhs_evaluations(
    trajectory: *const OdebenchTrajectory,
) -> u64 {
    trajectory.as_ref().map_or(0, |t| t.inner.stats.rhs_evaluations)
}

/// # Safety
/// `trajectory` must be a live trajectory handle or null.
#[no_mangle]
pub unsafe extern "C" fn odebench_trajectory_steps_accepted(
    trajectory: *const OdebenchTrajectory,
) -> u64 {
    trajectory.as_ref().map_or(0, |t| t.inner.stats.steps_accepted)
}

/// # Safety
/// `trajectory` must be a live trajectory handle or null.
#[no_mangle]
pub unsafe extern "C" fn odebench_trajectory_steps_rejected(
    trajectory: *const OdebenchTrajectory,
) -> u64 {
    trajectory.as_ref().map_or(0, |t| t.inner.stats.steps_rejected)
}

/// # Safety
/// `trajectory` must be a handle from an integrate call or null.
#[no_mangle]
pub unsafe extern "C" fn odebench_trajectory_free(trajectory: *mut OdebenchTrajectory) {
    if !trajectory.is_null() {
        drop(Box::from_raw(trajectory));
    }
}

/// Advances a single step of the chosen method, writing the new value to
/// `y_next`.
///
/// # Safety
/// `rhs` must be callable with `user_data`; `y_next` must be valid.
#[no_mangle]
pub unsafe extern "C" fn odebench_step(
    rhs: OdebenchRhsFn,
    user_data: *mut c_void,
    method: OdebenchMethod,
    x: f64,
    y: f64,
    h: f64,
    y_next: *mut f64,
) -> OdebenchCode {
    let Some(callback) = rhs else {
        return OdebenchCode::NullPointer;
    };
    if y_next.is_null() {
        return OdebenchCode::NullPointer;
    }
    if !h.is_finite() || h <= 0.0 {
        return OdebenchCode::InvalidConfig;
    }
    let cb = CallbackRhs { callback, user_data };
    match method.as_method().step(&cb, x, y, h, None) {
        Ok(result) => {
            *y_next = result.y_next;
            OdebenchCode::Ok
        }
        Err(_) => OdebenchCode::NonFiniteEvaluation,
    }
}

/// Leading-term local truncation error estimate for an Euler step at
/// `(x, y)`, written to `out`.
///
/// # Safety
/// `rhs` must be callable with `user_data`; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn odebench_local_truncation_error(
    rhs: OdebenchRhsFn,
    user_data: *mut c_void,
    x: f64,
    y: f64,
    h: f64,
    out: *mut f64,
) -> OdebenchCode {
    let Some(callback) = rhs else {
        return OdebenchCode::NullPointer;
    };
    if out.is_null() {
        return OdebenchCode::NullPointer;
    }
    let cb = CallbackRhs { callback, user_data };
    match estimate_local_truncation_error(&cb, x, y, h) {
        Ok(value) => {
            *out = value;
            OdebenchCode::Ok
        }
        Err(_) => OdebenchCode::NonFiniteEvaluation,
    }
}
