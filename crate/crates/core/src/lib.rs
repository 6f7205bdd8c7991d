//! Numerical initial-value-problem toolkit: five explicit ODE solvers
//! (Euler, Heun, midpoint, classical RK4, adaptive Dormand-Prince 5(4)),
//! three case-study models, and relative-error benchmarking against
//! reference series.
//!
//! The library layers cleanly:
//!
//! - [`problem`]: the `Rhs` trait, problems, trajectories, step configs
//! - [`steppers`] / [`tableau`]: the fixed-step methods and the general
//!   explicit Runge-Kutta engine they specialize
//! - [`driver`] / [`adaptive`]: interval integration, fixed and adaptive
//! - [`truncation`]: leading-term local truncation error estimation
//! - [`models`]: logistic, temperature, and market case studies
//! - [`analysis`]: series alignment, relative-error metrics, observed
//!   convergence orders
//! - [`scenario`], [`csvio`], [`plot`], [`harness`]: the `odebench` CLI's
//!   machinery
//!
//! ```
//! use odebench::{integrate_fixed, FixedStepConfig, IvpProblem, OneStepMethod};
//!
//! let problem = IvpProblem::new(|_x, y: f64| y, 0.0, 1.0, 1.0).unwrap();
//! let traj = integrate_fixed(&problem, &OneStepMethod::Rk4, &FixedStepConfig::new(0.1)).unwrap();
//! assert!((traj.last().1 - std::f64::consts::E).abs() < 1e-5);
//! ```

pub mod adaptive;
pub mod analysis;
pub mod csvio;
pub mod driver;
pub mod harness;
pub mod models;
pub mod plot;
pub mod problem;
pub mod scenario;
pub mod steppers;
pub mod tableau;
pub mod truncation;

pub use adaptive::{dopri45_step, integrate_adaptive, AdaptiveConfig, StepOutcome};
pub use analysis::{
    align_series, error_wrt_reference, estimate_convergence_order, ErrorReport, ReferenceSeries,
    SeriesKind,
};
pub use driver::{fixed_grid, integrate_fixed};
pub use models::{CaseModel, LogisticModel, MarketModel, TemperatureModel};
pub use problem::{
    CorrectorConfig, FixedStepConfig, IvpProblem, Rhs, Trajectory, TrajectoryStats,
    TrajectoryStatus,
};
pub use steppers::{euler_step, heun_step, midpoint_step, rk4_step, OneStepMethod, StepResult};
pub use tableau::{general_rk_step, ButcherTableau};
pub use truncation::estimate_local_truncation_error;
