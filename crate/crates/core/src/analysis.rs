//! Relative-error metrics against reference series, series alignment, and
//! observed convergence orders.

use thiserror::Error;

use crate::problem::{FixedStepConfig, IvpProblem, Rhs, Trajectory};
use crate::steppers::OneStepMethod;

/// Provenance of a reference series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// Measured data.
    Experimental,
    /// Values from an empirical relationship (a model curve).
    Empirical,
}

impl SeriesKind {
    pub fn label(&self) -> &'static str {
        match self {
            SeriesKind::Experimental => "experimental",
            SeriesKind::Empirical => "empirical",
        }
    }
}

/// An ordered `(t, value)` reference series: t strictly increasing, at least
/// two points, all values finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSeries {
    pub kind: SeriesKind,
    points: Vec<(f64, f64)>,
}

impl ReferenceSeries {
    pub fn new(kind: SeriesKind, points: Vec<(f64, f64)>) -> Result<Self, AnalysisError> {
        if points.len() < 2 {
            return Err(AnalysisError::TooFewPoints { got: points.len() });
        }
        if !points.iter().all(|&(t, v)| t.is_finite() && v.is_finite()) {
            return Err(AnalysisError::NonFinitePoint);
        }
        if !points.windows(2).all(|w| w[1].0 > w[0].0) {
            return Err(AnalysisError::NotIncreasing);
        }
        Ok(Self { kind, points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// Reference/estimate pairs produced by [`align_series`].
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedSeries {
    /// `(reference value, estimate value)` at each shared t.
    pub pairs: Vec<(f64, f64)>,
    /// True when reference points past a failed trajectory's end were
    /// dropped.
    pub truncated: bool,
}

/// The signed relative error of an estimate series against a reference,
/// plus supplements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// Σ(R_i − X_i) / Σ(R_i). Signed: over- and under-estimation at
    /// different points can cancel.
    pub signed_relative: f64,
    /// Σ|R_i − X_i| / Σ|R_i|, the cancellation-free companion.
    pub mean_abs_relative: f64,
    pub n_points_compared: usize,
    /// Comparison stopped at the solver's failure point.
    pub blowup_truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("a reference series needs at least 2 points, got {got}")]
    TooFewPoints { got: usize },
    #[error("reference series values must be finite")]
    NonFinitePoint,
    #[error("reference series t values must strictly increase")]
    NotIncreasing,
    #[error("reference series does not overlap the trajectory's x range")]
    NoOverlap,
    #[error("cannot compare empty pair list")]
    EmptyPairs,
    #[error("reference values sum to zero; the relative error is undefined")]
    ZeroReferenceSum,
    #[error("h values must be strictly decreasing with at least 2 entries")]
    InvalidHValues,
    #[error("every error is exactly zero; no convergence order is defined")]
    DegenerateOrder,
    #[error("integration failed during order estimation: {0}")]
    IntegrationFailed(String),
}

/// Pairs each reference point falling inside the trajectory's x-range with
/// the linearly interpolated trajectory value there.
///
/// Reference points beyond a failed trajectory's truncation point are
/// dropped and flagged. Errors with [`AnalysisError::NoOverlap`] when no
/// reference point lands inside the range.
pub fn align_series(
    trajectory: &Trajectory,
    reference: &ReferenceSeries,
) -> Result<AlignedSeries, AnalysisError> {
    let (_, hi) = trajectory.x_range();
    let mut pairs = Vec::new();
    let mut dropped_past_end = false;
    for &(t, value) in reference.points() {
        match trajectory.interpolate(t) {
            Some(estimate) => pairs.push((value, estimate)),
            None => {
                if t > hi {
                    dropped_past_end = true;
                }
            }
        }
    }
    if pairs.is_empty() {
        return Err(AnalysisError::NoOverlap);
    }
    Ok(AlignedSeries { pairs, truncated: trajectory.status.is_failure() && dropped_past_end })
}

/// The signed relative error Σ(R_i − X_i) / Σ(R_i) over aligned pairs.
pub fn error_wrt_reference(pairs: &[(f64, f64)]) -> Result<f64, AnalysisError> {
    if pairs.is_empty() {
        return Err(AnalysisError::EmptyPairs);
    }
    let diff_sum: f64 = pairs.iter().map(|&(r, x)| r - x).sum();
    let ref_sum: f64 = pairs.iter().map(|&(r, _)| r).sum();
    if ref_sum == 0.0 {
        return Err(AnalysisError::ZeroReferenceSum);
    }
    Ok(diff_sum / ref_sum)
}

/// Σ|R_i − X_i| / Σ|R_i|, immune to sign cancellation.
pub fn mean_abs_relative(pairs: &[(f64, f64)]) -> Result<f64, AnalysisError> {
    if pairs.is_empty() {
        return Err(AnalysisError::EmptyPairs);
    }
    let diff_sum: f64 = pairs.iter().map(|&(r, x)| (r - x).abs()).sum();
    let ref_sum: f64 = pairs.iter().map(|&(r, _)| r.abs()).sum();
    if ref_sum == 0.0 {
        return Err(AnalysisError::ZeroReferenceSum);
    }
    Ok(diff_sum / ref_sum)
}

/// Aligns a trajectory with a reference and bundles both error metrics.
pub fn error_report(
    trajectory: &Trajectory,
    reference: &ReferenceSeries,
) -> Result<ErrorReport, AnalysisError> {
    let aligned = align_series(trajectory, reference)?;
    Ok(ErrorReport {
        signed_relative: error_wrt_reference(&aligned.pairs)?,
        mean_abs_relative: mean_abs_relative(&aligned.pairs)?,
        n_points_compared: aligned.pairs.len(),
        blowup_truncated: aligned.truncated,
    })
}

/// Global error and observed order for one step size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderSample {
    pub h: f64,
    /// |y_numeric(x_end) − y_exact(x_end)|.
    pub global_error: f64,
    /// log(e_i/e_{i+1}) / log(h_i/h_{i+1}) against the next smaller h;
    /// absent for the last h and wherever an error is exactly zero.
    pub observed_order: Option<f64>,
}

/// Runs `method` at each step size and measures the observed convergence
/// order against the analytic oracle `exact(x_end)`.
///
/// `h_values` must be strictly decreasing with at least two entries. If
/// every error vanishes (the method is exact on this problem) no order is
/// defined and [`AnalysisError::DegenerateOrder`] is returned.
pub fn estimate_convergence_order<R: Rhs>(
    problem: &IvpProblem<R>,
    exact: impl Fn(f64) -> f64,
    method: &OneStepMethod,
    h_values: &[f64],
) -> Result<Vec<OrderSample>, AnalysisError> {
    if h_values.len() < 2 || !h_values.windows(2).all(|w| w[1] < w[0]) {
        return Err(AnalysisError::InvalidHValues);
    }
    let reference = exact(problem.x_end);
    let mut errors = Vec::with_capacity(h_values.len());
    for &h in h_values {
        let traj = crate::driver::integrate_fixed(problem, method, &FixedStepConfig::new(h))
            .map_err(|e| AnalysisError::IntegrationFailed(e.to_string()))?;
        if traj.status.is_failure() {
            return Err(AnalysisError::IntegrationFailed(format!(
                "{} did not reach x_end at h={h}",
                method.name()
            )));
        }
        errors.push((traj.last().1 - reference).abs());
    }

    let mut samples = Vec::with_capacity(h_values.len());
    let mut any_defined = false;
    for i in 0..h_values.len() {
        let observed_order = if i + 1 < h_values.len() && errors[i] > 0.0 && errors[i + 1] > 0.0 {
            any_defined = true;
            Some((errors[i] / errors[i + 1]).ln() / (h_values[i] / h_values[i + 1]).ln())
        } else {
            None
        };
        samples.push(OrderSample { h: h_values[i], global_error: errors[i], observed_order });
    }
    if !any_defined {
        return Err(AnalysisError::DegenerateOrder);
    }
    Ok(samples)
}
