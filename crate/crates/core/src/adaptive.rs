//! Embedded Dormand-Prince 5(4) pair with error-driven step-size control.
//!
//! Each step evaluates seven stages and forms a 5th- and a 4th-order
//! estimate from the two embedded weight rows. Their difference, scaled by
//! the tolerances, drives acceptance and the next step size through an
//! elementary proportional controller with safety/growth/shrink clamps. The
//! solution advances with the 5th-order value (local extrapolation).

use thiserror::Error;

use crate::problem::{
    IvpProblem, Rhs, Trajectory, TrajectoryStats, TrajectoryStatus, BLOWUP_GUARD,
};

// Dormand-Prince coefficients: nodes, stage coupling, and the embedded
// 5th/4th-order weight rows.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] =
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const A7: [f64; 6] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
const B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Stage evaluations per attempted step.
pub const STAGE_EVALUATIONS: u32 = 7;

// Guards against configurations (h_min near the subnormal range) that would
// otherwise let the driver loop without useful progress.
const MAX_STEP_ATTEMPTS: u64 = 5_000_000;

/// Settings for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_initial: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub safety: f64,
    pub growth_limit: f64,
    pub shrink_limit: f64,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 1e-9,
            h_initial: 1e-2,
            h_min: 1e-12,
            h_max: 1e2,
            safety: 0.9,
            growth_limit: 5.0,
            shrink_limit: 0.2,
        }
    }
}

impl AdaptiveConfig {
    /// Step bounds sized to an integration interval: starts at span/100,
    /// never exceeds the span, never shrinks below span·1e-14.
    pub fn for_span(span: f64) -> Self {
        Self {
            h_initial: span / 100.0,
            h_min: span * 1e-14,
            h_max: span,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), AdaptiveConfigError> {
        let ordered = 0.0 < self.h_min && self.h_min <= self.h_initial && self.h_initial <= self.h_max;
        if !ordered || !self.h_max.is_finite() {
            return Err(AdaptiveConfigError::StepBounds {
                h_min: self.h_min,
                h_initial: self.h_initial,
                h_max: self.h_max,
            });
        }
        let tols_ok = self.rel_tol > 0.0 && self.abs_tol >= 0.0;
        if !tols_ok {
            return Err(AdaptiveConfigError::Tolerances {
                rel_tol: self.rel_tol,
                abs_tol: self.abs_tol,
            });
        }
        if !(self.safety > 0.0 && self.safety < 1.0) {
            return Err(AdaptiveConfigError::Controller("safety must lie in (0, 1)"));
        }
        if !(self.shrink_limit < 1.0 && 1.0 < self.growth_limit) {
            return Err(AdaptiveConfigError::Controller(
                "need shrink_limit < 1 < growth_limit",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdaptiveConfigError {
    #[error("need 0 < h_min <= h_initial <= h_max, got {h_min}, {h_initial}, {h_max}")]
    StepBounds { h_min: f64, h_initial: f64, h_max: f64 },
    #[error("need rel_tol > 0 and abs_tol >= 0, got {rel_tol}, {abs_tol}")]
    Tolerances { rel_tol: f64, abs_tol: f64 },
    #[error("{0}")]
    Controller(&'static str),
}

/// Outcome of a single attempted Dormand-Prince step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    /// True iff the scaled error estimate is at most 1.
    pub accepted: bool,
    /// 5th-order estimate (the advancing value on acceptance).
    pub y5: f64,
    /// Embedded 4th-order estimate.
    pub y4: f64,
    /// |y5 − y4| / (abs_tol + rel_tol·max(|y|, |y5|)).
    pub err_est: f64,
    pub h_used: f64,
    /// Proposed next step size, clamped to [h_min, h_max].
    pub h_next: f64,
}

/// Attempts one step of size `h` from `(x, y)`.
///
/// Seven rhs evaluations, always. A non-finite stage or estimate is treated
/// as a rejected step with an infinite error estimate, so the controller
/// shrinks toward `h_min` rather than propagating NaN.
pub fn dopri45_step<R: Rhs + ?Sized>(
    rhs: &R,
    x: f64,
    y: f64,
    h: f64,
    config: &AdaptiveConfig,
) -> StepOutcome {
    let k1 = rhs.eval(x, y);
    let k2 = rhs.eval(x + C[1] * h, y + stage_sum(&A2, &[k1]) * h);
    let k3 = rhs.eval(x + C[2] * h, y + stage_sum(&A3, &[k1, k2]) * h);
    let k4 = rhs.eval(x + C[3] * h, y + stage_sum(&A4, &[k1, k2, k3]) * h);
    let k5 = rhs.eval(x + C[4] * h, y + stage_sum(&A5, &[k1, k2, k3, k4]) * h);
    let k6 = rhs.eval(x + C[5] * h, y + stage_sum(&A6, &[k1, k2, k3, k4, k5]) * h);
    let k7 = rhs.eval(x + C[6] * h, y + stage_sum(&A7, &[k1, k2, k3, k4, k5, k6]) * h);

    let k = [k1, k2, k3, k4, k5, k6, k7];
    let y5 = y + stage_sum(&B5, &k) * h;
    let y4 = y + stage_sum(&B4, &k) * h;

    if !k.iter().all(|v| v.is_finite()) || !y5.is_finite() || !y4.is_finite() {
        return StepOutcome {
            accepted: false,
            y5: f64::NAN,
            y4: f64::NAN,
            err_est: f64::INFINITY,
            h_used: h,
            h_next: clamp(h * config.shrink_limit, config.h_min, config.h_max),
        };
    }

    let diff = (y5 - y4).abs();
    let scale = config.abs_tol + config.rel_tol * y.abs().max(y5.abs());
    // Agreement between the orders is zero error even when the scale
    // degenerates (abs_tol = 0 around y = 0).
    let err_est = if diff == 0.0 { 0.0 } else { diff / scale };
    // err_est == 0 sends the factor to +inf; the clamp turns that into the
    // growth limit.
    let factor = clamp(config.safety * err_est.powf(-0.2), config.shrink_limit, config.growth_limit);
    StepOutcome {
        accepted: err_est <= 1.0,
        y5,
        y4,
        err_est,
        h_used: h,
        h_next: clamp(h * factor, config.h_min, config.h_max),
    }
}

fn stage_sum(coeffs: &[f64], k: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&c, &kj) in coeffs.iter().zip(k) {
        if c != 0.0 {
            acc += c * kj;
        }
    }
    acc
}

fn clamp(v: f64, lo: f64, hi: f64) -> f64 {
    v.max(lo).min(hi)
}

/// Integrates `problem` with the embedded pair, accepting or rejecting each
/// step by its error estimate.
///
/// Accepted steps advance with `y5` and are recorded; rejected steps retry
/// with the shrunken step and never move x or y. The final step is
/// shortened to land exactly on `x_end`. If a step is rejected while
/// already at `h_min`, integration stops with
/// [`TrajectoryStatus::StepUnderflow`].
pub fn integrate_adaptive<R: Rhs>(
    problem: &IvpProblem<R>,
    config: &AdaptiveConfig,
) -> Result<Trajectory, AdaptiveConfigError> {
    config.validate()?;

    let mut samples = vec![(problem.x0, problem.y0)];
    let mut stats = TrajectoryStats::default();
    let mut x = problem.x0;
    let mut y = problem.y0;
    let mut h = config.h_initial;

    let mut attempts = 0u64;
    while x < problem.x_end {
        attempts += 1;
        if attempts > MAX_STEP_ATTEMPTS {
            return Ok(Trajectory {
                samples,
                status: TrajectoryStatus::StepUnderflow { x_fail: x },
                stats,
            });
        }
        let remaining = problem.x_end - x;
        let final_step = h >= remaining;
        let h_eff = if final_step { remaining } else { h };

        let outcome = dopri45_step(&problem.rhs, x, y, h_eff, config);
        stats.rhs_evaluations += u64::from(STAGE_EVALUATIONS);

        if outcome.accepted {
            let x_new = if final_step { problem.x_end } else { x + h_eff };
            // h_min below one ulp of x would stall the grid.
            if x_new <= x {
                return Ok(Trajectory {
                    samples,
                    status: TrajectoryStatus::StepUnderflow { x_fail: x },
                    stats,
                });
            }
            stats.steps_accepted += 1;
            x = x_new;
            y = outcome.y5;
            if !y.is_finite() || y.abs() > BLOWUP_GUARD {
                let x_fail = samples.last().expect("non-empty").0;
                return Ok(Trajectory {
                    samples,
                    status: TrajectoryStatus::BlowUp { x_fail },
                    stats,
                });
            }
            samples.push((x, y));
            h = outcome.h_next;
        } else {
            stats.steps_rejected += 1;
            // Rejected at the smallest permitted step: no way forward.
            if h_eff <= config.h_min {
                return Ok(Trajectory {
                    samples,
                    status: TrajectoryStatus::StepUnderflow { x_fail: x },
                    stats,
                });
            }
            h = outcome.h_next.min(h_eff);
        }
    }

    Ok(Trajectory { samples, status: TrajectoryStatus::Completed, stats })
}
