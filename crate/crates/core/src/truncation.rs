//! Leading-term local truncation error estimate for one-step methods.

use crate::problem::Rhs;
use crate::steppers::{eval_checked, StepError};

/// Estimates the approximate local truncation error committed by a single
/// Euler step of size `h` at `(x, y)`:
///
/// ```text
/// E_a = f'(x, y)/2! · h²
/// ```
///
/// with the total derivative `f' = ∂f/∂x + f·∂f/∂y` formed from central
/// finite differences using perturbations `δ = max(1e-6, 1e-6·|x|)` (and
/// analogously for y). Only pointwise rhs evaluation is required.
pub fn estimate_local_truncation_error<R: Rhs + ?Sized>(
    rhs: &R,
    x: f64,
    y: f64,
    h: f64,
) -> Result<f64, StepError> {
    let dx = 1e-6f64.max(1e-6 * x.abs());
    let dy = 1e-6f64.max(1e-6 * y.abs());

    let f = eval_checked(rhs, x, y)?;
    let df_dx =
        (eval_checked(rhs, x + dx, y)? - eval_checked(rhs, x - dx, y)?) / (2.0 * dx);
    let df_dy =
        (eval_checked(rhs, x, y + dy)? - eval_checked(rhs, x, y - dy)?) / (2.0 * dy);

    let total_derivative = df_dx + f * df_dy;
    Ok(total_derivative / 2.0 * h * h)
}
