//! The four fixed-step one-step methods: Euler, Heun (predictor-corrector),
//! midpoint, and classical fourth-order Runge-Kutta.
//!
//! Every method advances `y_next = y + φ·h` where φ is that method's
//! representative slope over the interval. The φ accumulations here are
//! written term-by-term in the same order the tableau engine uses, so the
//! dedicated steppers and [`general_rk_step`](crate::tableau::general_rk_step)
//! agree bit-for-bit on the matching tableaus.

use thiserror::Error;

use crate::problem::{CorrectorConfig, Rhs};
use crate::tableau::ButcherTableau;

/// Result of advancing one step with a fixed-step method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResult {
    pub y_next: f64,
    /// Slope evaluations performed by this step (>= 1).
    pub rhs_evaluations: u32,
    /// Corrector re-applications beyond the first pass (0 for
    /// non-iterative methods and for the plain predictor-corrector pass).
    pub corrector_iterations: u32,
    /// Last |ε_a| = |(y^j − y^{j−1})/y^j|·100% seen by the corrector loop,
    /// in percent. `None` when no loop ran or the denominator hit zero.
    pub final_epsilon_a: Option<f64>,
}

impl StepResult {
    fn plain(y_next: f64, rhs_evaluations: u32) -> Self {
        Self { y_next, rhs_evaluations, corrector_iterations: 0, final_epsilon_a: None }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error("rhs evaluation returned a non-finite value at (x={x}, y={y})")]
    NonFiniteEvaluation { x: f64, y: f64 },
}

pub(crate) fn eval_checked<R: Rhs + ?Sized>(rhs: &R, x: f64, y: f64) -> Result<f64, StepError> {
    let v = rhs.eval(x, y);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(StepError::NonFiniteEvaluation { x, y })
    }
}

/// Euler (point-slope) step: `y_next = y + f(x, y)·h`. One evaluation.
pub fn euler_step<R: Rhs + ?Sized>(
    rhs: &R,
    x: f64,
    y: f64,
    h: f64,
) -> Result<StepResult, StepError> {
    let k1 = eval_checked(rhs, x, y)?;
    Ok(StepResult::plain(y + k1 * h, 1))
}

/// Heun predictor-corrector step.
///
/// Predictor: `y⁰ = y + f(x, y)·h`. Corrector: `y_next = y + ½(f(x, y) +
/// f(x+h, y⁰))·h`. With a [`CorrectorConfig`] the corrector is re-applied,
/// feeding each iterate back in, until |ε_a| drops to `tol_percent` or
/// `max_iters` re-applications have run. The iteration converges to the
/// corrector's fixed point, not to the true solution, so it is off unless
/// requested. An iterate of exactly zero leaves ε_a undefined and stops the
/// loop.
pub fn heun_step<R: Rhs + ?Sized>(
    rhs: &R,
    x: f64,
    y: f64,
    h: f64,
    corrector: Option<CorrectorConfig>,
) -> Result<StepResult, StepError> {
    let k1 = eval_checked(rhs, x, y)?;
    let predictor = y + k1 * h;
    let x_end = x + h;
    let k2 = eval_checked(rhs, x_end, predictor)?;
    let mut current = y + (0.5 * k1 + 0.5 * k2) * h;
    let mut evals = 2u32;
    let mut iterations = 0u32;
    let mut epsilon = None;

    if let Some(cfg) = corrector {
        epsilon = epsilon_a(current, predictor);
        while iterations < cfg.max_iters {
            match epsilon {
                Some(e) if e > cfg.tol_percent => {}
                // converged, or ε_a undefined because the iterate is zero
                _ => break,
            }
            let previous = current;
            let slope_end = eval_checked(rhs, x_end, previous)?;
            current = y + (0.5 * k1 + 0.5 * slope_end) * h;
            evals += 1;
            iterations += 1;
            epsilon = epsilon_a(current, previous);
        }
    }

    Ok(StepResult {
        y_next: current,
        rhs_evaluations: evals,
        corrector_iterations: iterations,
        final_epsilon_a: epsilon,
    })
}

fn epsilon_a(current: f64, previous: f64) -> Option<f64> {
    if current == 0.0 {
        None
    } else {
        Some(((current - previous) / current).abs() * 100.0)
    }
}

/// Midpoint step: Euler half-step to the interval midpoint, then the slope
/// there carries the whole step. Two evaluations; the update has no feedback
/// term, so there is nothing to iterate.
pub fn midpoint_step<R: Rhs + ?Sized>(
    rhs: &R,
    x: f64,
    y: f64,
    h: f64,
) -> Result<StepResult, StepError> {
    let k1 = eval_checked(rhs, x, y)?;
    let y_mid = y + (0.5 * k1) * h;
    let k2 = eval_checked(rhs, x + 0.5 * h, y_mid)?;
    Ok(StepResult::plain(y + k2 * h, 2))
}

/// Classical fourth-order Runge-Kutta step. Four evaluations.
///
/// For an rhs depending on x alone this reduces to Simpson's 1/3 rule over
/// the step.
pub fn rk4_step<R: Rhs + ?Sized>(
    rhs: &R,
    x: f64,
    y: f64,
    h: f64,
) -> Result<StepResult, StepError> {
    const W_END: f64 = 1.0 / 6.0;
    const W_MID: f64 = 1.0 / 3.0;
    let k1 = eval_checked(rhs, x, y)?;
    let k2 = eval_checked(rhs, x + 0.5 * h, y + (0.5 * k1) * h)?;
    let k3 = eval_checked(rhs, x + 0.5 * h, y + (0.5 * k2) * h)?;
    let k4 = eval_checked(rhs, x + h, y + k3 * h)?;
    let phi = W_END * k1 + W_MID * k2 + W_MID * k3 + W_END * k4;
    Ok(StepResult::plain(y + phi * h, 4))
}

/// A one-step method usable by the fixed-step driver.
#[derive(Debug, Clone, PartialEq)]
pub enum OneStepMethod {
    Euler,
    Heun,
    Midpoint,
    Rk4,
    /// Any explicit method given by its tableau.
    General(ButcherTableau),
}

impl OneStepMethod {
    pub fn name(&self) -> &'static str {
        match self {
            OneStepMethod::Euler => "euler",
            OneStepMethod::Heun => "heun",
            OneStepMethod::Midpoint => "midpoint",
            OneStepMethod::Rk4 => "rk4",
            OneStepMethod::General(_) => "general-rk",
        }
    }

    /// Advances one step. The corrector setting only affects Heun.
    pub fn step<R: Rhs + ?Sized>(
        &self,
        rhs: &R,
        x: f64,
        y: f64,
        h: f64,
        corrector: Option<CorrectorConfig>,
    ) -> Result<StepResult, StepError> {
        match self {
            OneStepMethod::Euler => euler_step(rhs, x, y, h),
            OneStepMethod::Heun => heun_step(rhs, x, y, h, corrector),
            OneStepMethod::Midpoint => midpoint_step(rhs, x, y, h),
            OneStepMethod::Rk4 => rk4_step(rhs, x, y, h),
            OneStepMethod::General(tableau) => crate::tableau::general_rk_step(tableau, rhs, x, y, h),
        }
    }
}
