//! Problem and trajectory data model shared by every solver.

use thiserror::Error;

/// Right-hand side of a first-order scalar ODE, `dy/dx = f(x, y)`.
///
/// Implementations must be deterministic (identical inputs yield identical
/// outputs within one process run) and must not mutate state observable by
/// the toolkit. Any `Fn(f64, f64) -> f64` closure qualifies.
pub trait Rhs {
    fn eval(&self, x: f64, y: f64) -> f64;
}

impl<F: Fn(f64, f64) -> f64> Rhs for F {
    fn eval(&self, x: f64, y: f64) -> f64 {
        self(x, y)
    }
}

impl Rhs for Box<dyn Rhs + Send + Sync> {
    fn eval(&self, x: f64, y: f64) -> f64 {
        self.as_ref().eval(x, y)
    }
}

/// Absolute magnitude beyond which a trajectory is declared blown up even
/// though the value is still finite. Keeps runaway solutions from reaching
/// infinity before the driver notices.
pub const BLOWUP_GUARD: f64 = 1e12;

/// An initial value problem `y' = f(x, y)`, `y(x0) = y0`, on `[x0, x_end]`.
#[derive(Debug, Clone)]
pub struct IvpProblem<R: Rhs> {
    pub rhs: R,
    pub x0: f64,
    pub y0: f64,
    pub x_end: f64,
}

impl<R: Rhs> IvpProblem<R> {
    /// Builds a problem, rejecting empty intervals and non-finite endpoints.
    pub fn new(rhs: R, x0: f64, y0: f64, x_end: f64) -> Result<Self, ProblemError> {
        if !x0.is_finite() || !y0.is_finite() || !x_end.is_finite() {
            return Err(ProblemError::NonFinite);
        }
        if x_end <= x0 {
            return Err(ProblemError::EmptyInterval { x0, x_end });
        }
        Ok(Self { rhs, x0, y0, x_end })
    }

    pub fn span(&self) -> f64 {
        self.x_end - self.x0
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("x0, y0 and x_end must be finite")]
    NonFinite,
    #[error("interval is empty: x_end ({x_end}) must exceed x0 ({x0})")]
    EmptyInterval { x0: f64, x_end: f64 },
}

/// How an integration run ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrajectoryStatus {
    /// Reached `x_end`; the last sample lands exactly on it.
    Completed,
    /// A step produced a non-finite value or exceeded [`BLOWUP_GUARD`];
    /// `x_fail` is the last sample that remained finite.
    BlowUp { x_fail: f64 },
    /// The adaptive controller rejected a step at the minimum step size;
    /// `x_fail` is where progress stopped.
    StepUnderflow { x_fail: f64 },
}

impl TrajectoryStatus {
    pub fn is_completed(&self) -> bool {
        matches!(self, TrajectoryStatus::Completed)
    }

    pub fn is_failure(&self) -> bool {
        !self.is_completed()
    }

    /// Point at which a failed run stopped, if it failed.
    pub fn x_fail(&self) -> Option<f64> {
        match *self {
            TrajectoryStatus::Completed => None,
            TrajectoryStatus::BlowUp { x_fail } | TrajectoryStatus::StepUnderflow { x_fail } => {
                Some(x_fail)
            }
        }
    }
}

/// Evaluation and step counters accumulated during a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrajectoryStats {
    /// Every call made to `Rhs::eval`, including those in rejected steps.
    pub rhs_evaluations: u64,
    pub steps_accepted: u64,
    pub steps_rejected: u64,
}

/// Ordered `(x, y)` samples produced by an integration run.
///
/// `samples[0]` is the initial condition, x strictly increases, and every
/// stored y is finite; non-finite values terminate the run instead.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<(f64, f64)>,
    pub status: TrajectoryStatus,
    pub stats: TrajectoryStats,
}

impl Trajectory {
    pub fn last(&self) -> (f64, f64) {
        *self.samples.last().expect("trajectory holds the initial sample")
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.samples[0].0, self.last().0)
    }

    /// Linearly interpolates y at `x`, or `None` outside the sampled range.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        let (lo, hi) = self.x_range();
        if x < lo || x > hi {
            return None;
        }
        // partition_point finds the first sample with sample.x >= x
        let idx = self.samples.partition_point(|&(sx, _)| sx < x);
        if idx == 0 {
            return Some(self.samples[0].1);
        }
        let (x1, y1) = self.samples[idx - 1];
        let (x2, y2) = self.samples[idx];
        if x == x2 {
            return Some(y2);
        }
        Some(y1 + (y2 - y1) * (x - x1) / (x2 - x1))
    }
}

/// Per-step corrector iteration settings (Heun only).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectorConfig {
    /// Maximum number of corrector re-applications after the first pass.
    pub max_iters: u32,
    /// Stop once |ε_a| = |(y^j − y^{j−1})/y^j|·100% falls to this value.
    pub tol_percent: f64,
}

impl CorrectorConfig {
    pub fn new(max_iters: u32, tol_percent: f64) -> Result<Self, ConfigError> {
        let positive = tol_percent > 0.0;
        if !positive {
            return Err(ConfigError::NonPositive { field: "tol_percent" });
        }
        Ok(Self { max_iters, tol_percent })
    }
}

/// Fixed-step integration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedStepConfig {
    /// Step size, in the same units as x.
    pub h: f64,
    pub corrector: Option<CorrectorConfig>,
}

impl FixedStepConfig {
    pub fn new(h: f64) -> Self {
        Self { h, corrector: None }
    }

    pub fn with_corrector(h: f64, corrector: CorrectorConfig) -> Self {
        Self { h, corrector: Some(corrector) }
    }

    pub(crate) fn validate(&self, span: f64) -> Result<(), ConfigError> {
        let usable = self.h.is_finite() && self.h > 0.0;
        if !usable {
            return Err(ConfigError::NonPositive { field: "h" });
        }
        if self.h > span {
            return Err(ConfigError::StepExceedsInterval { h: self.h, span });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{field} must be positive and finite")]
    NonPositive { field: &'static str },
    #[error("step size h ({h}) exceeds the integration interval ({span})")]
    StepExceedsInterval { h: f64, span: f64 },
}
