//! Fixed-step integration driver: advances any one-step method across the
//! problem interval, recording every accepted point.

use crate::problem::{
    ConfigError, FixedStepConfig, IvpProblem, Rhs, Trajectory, TrajectoryStats, TrajectoryStatus,
    BLOWUP_GUARD,
};
use crate::steppers::OneStepMethod;

/// The step grid used by [`integrate_fixed`]: `x0 + i·h` computed directly
/// (not by accumulation, so the grid does not drift), with the final point
/// replaced by `x_end` when h does not divide the interval.
pub fn fixed_grid(x0: f64, x_end: f64, h: f64) -> Vec<f64> {
    let n_full = ((x_end - x0) / h).floor() as u64;
    let lands_on_grid = x0 + n_full as f64 * h >= x_end;
    let n_total = if lands_on_grid { n_full } else { n_full + 1 };
    let mut grid = Vec::with_capacity(n_total as usize + 1);
    grid.push(x0);
    for i in 1..n_total {
        grid.push(x0 + i as f64 * h);
    }
    if n_total >= 1 {
        grid.push(x_end);
    }
    grid
}

/// Integrates `problem` from `x0` to `x_end` in steps of `config.h`,
/// shortening the final step to land exactly on `x_end`.
///
/// Samples sit on [`fixed_grid`]. A non-finite step value, a value beyond
/// [`BLOWUP_GUARD`], or a non-finite rhs evaluation inside a step truncates
/// the trajectory with [`TrajectoryStatus::BlowUp`]; blow-up is a reported
/// outcome, not an error.
pub fn integrate_fixed<R: Rhs>(
    problem: &IvpProblem<R>,
    method: &OneStepMethod,
    config: &FixedStepConfig,
) -> Result<Trajectory, ConfigError> {
    config.validate(problem.span())?;
    let h = config.h;
    let grid = fixed_grid(problem.x0, problem.x_end, h);

    let mut samples = Vec::with_capacity(grid.len());
    samples.push((problem.x0, problem.y0));
    let mut stats = TrajectoryStats::default();
    let mut x = problem.x0;
    let mut y = problem.y0;

    for i in 1..grid.len() {
        let x_next = grid[i];
        let h_step = if i + 1 == grid.len() { x_next - x } else { h };
        if h_step <= 0.0 {
            // Rounding left no room before x_end; snap the last sample.
            samples.last_mut().expect("non-empty").0 = problem.x_end;
            break;
        }
        match method.step(&problem.rhs, x, y, h_step, config.corrector) {
            Ok(step) => {
                stats.rhs_evaluations += u64::from(step.rhs_evaluations);
                if !step.y_next.is_finite() || step.y_next.abs() > BLOWUP_GUARD {
                    return Ok(Trajectory {
                        samples,
                        status: TrajectoryStatus::BlowUp { x_fail: x },
                        stats,
                    });
                }
                stats.steps_accepted += 1;
                x = x_next;
                y = step.y_next;
                samples.push((x, y));
            }
            Err(_) => {
                return Ok(Trajectory {
                    samples,
                    status: TrajectoryStatus::BlowUp { x_fail: x },
                    stats,
                });
            }
        }
    }

    Ok(Trajectory { samples, status: TrajectoryStatus::Completed, stats })
}
