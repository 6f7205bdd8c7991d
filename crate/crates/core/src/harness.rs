//! Benchmark harness behind the `odebench` CLI: runs a scenario's solvers,
//! scores them against reference series, and writes the CSV/SVG artifacts.

use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

use crate::adaptive::integrate_adaptive;
use crate::analysis::{
    error_report, estimate_convergence_order, AnalysisError, ErrorReport, ReferenceSeries,
    SeriesKind,
};
use crate::csvio::{format_opt_real, format_real, read_reference_csv, Csv, CsvError};
use crate::driver::{fixed_grid, integrate_fixed};
use crate::models::{defaults, CaseModel};
use crate::plot::{render_line_chart, Series};
use crate::problem::{IvpProblem, Rhs, Trajectory};
use crate::scenario::{Scenario, ScenarioError, SolverKind};
use crate::steppers::OneStepMethod;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("reference data: {0}")]
    Reference(#[from] CsvError),
    #[error("{0}")]
    UnknownSolver(String),
    #[error("unknown stepper `{0}` (expected euler, heun, midpoint or rk4)")]
    UnknownStepper(String),
    #[error("model `{0}` has no analytic oracle (available: logistic, cooling, linear)")]
    MissingOracle(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("analysis: {0}")]
    Analysis(#[from] AnalysisError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl HarnessError {
    /// CLI exit code: 2 for bad input, 3 for unwritable output.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Output { .. } => 3,
            _ => 2,
        }
    }
}

/// One solver's complete result within a scenario run.
#[derive(Debug, Clone)]
pub struct SolverRun {
    pub solver: SolverKind,
    pub trajectory: Trajectory,
    pub reports: Vec<(SeriesKind, ErrorReport)>,
    pub wall_ms: f64,
}

/// Everything produced by one `run` invocation, before file writing.
#[derive(Debug, Clone)]
pub struct RunArtifact {
    pub scenario_name: String,
    pub runs: Vec<SolverRun>,
    pub references: Vec<ReferenceSeries>,
}

/// Integrates every selected solver and scores it against each reference.
pub fn run_scenario(
    scenario: &Scenario,
    solver_filter: Option<&[SolverKind]>,
) -> Result<RunArtifact, HarnessError> {
    let solvers: Vec<SolverKind> = match solver_filter {
        Some(filter) => filter.to_vec(),
        None => scenario.solvers.clone(),
    };

    let mut references = Vec::new();
    for (kind, path) in &scenario.references {
        references.push(read_reference_csv(path, *kind)?);
    }

    let problem = scenario.problem();
    let mut runs = Vec::with_capacity(solvers.len());
    for solver in solvers {
        let started = Instant::now();
        let trajectory = integrate_solver(&problem, scenario, solver)?;
        let wall_ms = started.elapsed().as_secs_f64() * 1e3;

        let mut reports = Vec::with_capacity(references.len());
        for reference in &references {
            let report = match error_report(&trajectory, reference) {
                Ok(r) => r,
                // A run that failed before the first reference point still
                // gets a row: nothing comparable, truncation flagged.
                Err(AnalysisError::NoOverlap) if trajectory.status.is_failure() => ErrorReport {
                    signed_relative: f64::NAN,
                    mean_abs_relative: f64::NAN,
                    n_points_compared: 0,
                    blowup_truncated: true,
                },
                Err(e) => return Err(e.into()),
            };
            reports.push((reference.kind, report));
        }
        runs.push(SolverRun { solver, trajectory, reports, wall_ms });
    }

    Ok(RunArtifact { scenario_name: scenario.name.clone(), runs, references })
}

fn integrate_solver(
    problem: &IvpProblem<CaseModel>,
    scenario: &Scenario,
    solver: SolverKind,
) -> Result<Trajectory, HarnessError> {
    let trajectory = match solver {
        SolverKind::Euler => {
            integrate_fixed(problem, &OneStepMethod::Euler, &scenario.fixed_config())
        }
        SolverKind::Heun => {
            integrate_fixed(problem, &OneStepMethod::Heun, &scenario.fixed_config())
        }
        SolverKind::Midpoint => {
            integrate_fixed(problem, &OneStepMethod::Midpoint, &scenario.fixed_config())
        }
        SolverKind::Rk4 => integrate_fixed(problem, &OneStepMethod::Rk4, &scenario.fixed_config()),
        SolverKind::Rk45 => {
            return integrate_adaptive(problem, &scenario.adaptive_config()).map_err(|e| {
                HarnessError::Scenario(ScenarioError::Validation {
                    path: scenario.name.clone(),
                    field: "rel_tol".to_string(),
                    message: e.to_string(),
                })
            })
        }
    };
    trajectory.map_err(|e| {
        HarnessError::Scenario(ScenarioError::Validation {
            path: scenario.name.clone(),
            field: "h".to_string(),
            message: e.to_string(),
        })
    })
}

/// Parses a comma-separated `--solvers` filter, naming any bad entry.
pub fn parse_solver_filter(filter: &str) -> Result<Vec<SolverKind>, HarnessError> {
    let mut solvers = Vec::new();
    for token in filter.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let solver: SolverKind = token.parse().map_err(HarnessError::UnknownSolver)?;
        if !solvers.contains(&solver) {
            solvers.push(solver);
        }
    }
    if solvers.is_empty() {
        return Err(HarnessError::UnknownSolver("empty solver filter".to_string()));
    }
    Ok(solvers)
}

// ---------------------------------------------------------------------------
// Artifact files
// ---------------------------------------------------------------------------

/// File names emitted by [`write_run_artifact`].
pub const TRAJECTORIES_FILE: &str = "trajectories.csv";
pub const ERRORS_FILE: &str = "errors.csv";
pub const COSTS_FILE: &str = "costs.csv";
pub const PLOT_FILE: &str = "plot.svg";

/// Writes trajectories.csv, errors.csv, costs.csv and plot.svg into
/// `out_dir`, creating it if needed. Returns the paths written.
pub fn write_run_artifact(
    artifact: &RunArtifact,
    scenario: &Scenario,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, HarnessError> {
    ensure_dir(out_dir)?;
    let mut written = Vec::new();

    let trajectories = trajectories_csv(artifact, scenario);
    let path = out_dir.join(TRAJECTORIES_FILE);
    write_csv(&trajectories, &path)?;
    written.push(path);

    let errors = errors_csv(artifact);
    let path = out_dir.join(ERRORS_FILE);
    write_csv(&errors, &path)?;
    written.push(path);

    let costs = costs_csv(artifact);
    let path = out_dir.join(COSTS_FILE);
    write_csv(&costs, &path)?;
    written.push(path);

    let svg = plot_svg(artifact, scenario);
    let path = out_dir.join(PLOT_FILE);
    std::fs::write(&path, svg)
        .map_err(|source| HarnessError::Output { path: path.display().to_string(), source })?;
    written.push(path);

    Ok(written)
}

/// The shared-grid trajectory table: column `t` on the scenario's fixed
/// grid, one column per solver (linearly interpolated where a solver's own
/// grid differs, blank past a failed solver's truncation point), plus one
/// column per reference series.
pub fn trajectories_csv(artifact: &RunArtifact, scenario: &Scenario) -> Csv {
    let grid = fixed_grid(scenario.x0, scenario.x_end, scenario.h);
    let mut header: Vec<String> = vec!["t".to_string()];
    header.extend(artifact.runs.iter().map(|r| r.solver.name().to_string()));
    header.extend(artifact.references.iter().map(|r| r.kind.label().to_string()));

    let mut csv = Csv {
        comments: vec![format!("scenario: {}", artifact.scenario_name)],
        header,
        rows: Vec::with_capacity(grid.len()),
    };
    for &t in &grid {
        let mut row = Vec::with_capacity(csv.header.len());
        row.push(format_real(t));
        for run in &artifact.runs {
            row.push(format_opt_real(run.trajectory.interpolate(t)));
        }
        for reference in &artifact.references {
            row.push(format_opt_real(interp_points(reference.points(), t)));
        }
        csv.rows.push(row);
    }
    csv
}

fn errors_csv(artifact: &RunArtifact) -> Csv {
    let mut csv = Csv::new(&[
        "solver",
        "reference",
        "signed_relative",
        "mean_abs_relative",
        "n_points",
        "blowup_truncated",
    ]);
    for run in &artifact.runs {
        for (kind, report) in &run.reports {
            csv.push_row(vec![
                run.solver.name().to_string(),
                kind.label().to_string(),
                format_opt_real((!report.signed_relative.is_nan()).then_some(report.signed_relative)),
                format_opt_real(
                    (!report.mean_abs_relative.is_nan()).then_some(report.mean_abs_relative),
                ),
                report.n_points_compared.to_string(),
                report.blowup_truncated.to_string(),
            ]);
        }
    }
    csv
}

fn costs_csv(artifact: &RunArtifact) -> Csv {
    let mut csv = Csv::new(&[
        "solver",
        "rhs_evaluations",
        "steps_accepted",
        "steps_rejected",
        "status",
        "wall_ms",
    ]);
    for run in &artifact.runs {
        let status = match run.trajectory.status {
            crate::problem::TrajectoryStatus::Completed => "completed".to_string(),
            crate::problem::TrajectoryStatus::BlowUp { x_fail } => {
                format!("blowup@{}", format_real(x_fail))
            }
            crate::problem::TrajectoryStatus::StepUnderflow { x_fail } => {
                format!("underflow@{}", format_real(x_fail))
            }
        };
        csv.push_row(vec![
            run.solver.name().to_string(),
            run.trajectory.stats.rhs_evaluations.to_string(),
            run.trajectory.stats.steps_accepted.to_string(),
            run.trajectory.stats.steps_rejected.to_string(),
            status,
            format!("{:.3}", run.wall_ms),
        ]);
    }
    csv
}

fn plot_svg(artifact: &RunArtifact, scenario: &Scenario) -> String {
    let mut series = Vec::new();
    for run in &artifact.runs {
        series.push(Series::solid(run.solver.name(), run.trajectory.samples.clone()));
    }
    for reference in &artifact.references {
        series.push(Series::dashed(reference.kind.label(), reference.points().to_vec()));
    }
    render_line_chart(
        &artifact.scenario_name,
        "t",
        scenario.model.variable_name(),
        &series,
    )
}

fn interp_points(points: &[(f64, f64)], t: f64) -> Option<f64> {
    let first = points.first()?;
    let last = points.last()?;
    if t < first.0 || t > last.0 {
        return None;
    }
    let idx = points.partition_point(|&(pt, _)| pt < t);
    if idx == 0 {
        return Some(first.1);
    }
    let (t1, v1) = points[idx - 1];
    let (t2, v2) = points[idx];
    if t == t2 {
        return Some(v2);
    }
    Some(v1 + (v2 - v1) * (t - t1) / (t2 - t1))
}

fn ensure_dir(dir: &Path) -> Result<(), HarnessError> {
    std::fs::create_dir_all(dir)
        .map_err(|source| HarnessError::Output { path: dir.display().to_string(), source })
}

fn write_csv(csv: &Csv, path: &Path) -> Result<(), HarnessError> {
    csv.write_to(path).map_err(|e| match e {
        CsvError::Io { path, source } => HarnessError::Output { path, source },
        other => HarnessError::Reference(other),
    })
}

// ---------------------------------------------------------------------------
// Convergence command
// ---------------------------------------------------------------------------

pub const ORDERS_FILE: &str = "orders.csv";

type OracleProblem = (IvpProblem<Box<dyn Rhs + Send + Sync>>, Box<dyn Fn(f64) -> f64>);

/// Problems with analytic oracles available to `odebench convergence`.
pub fn oracle_problem(model: &str) -> Option<OracleProblem> {
    match model {
        "logistic" => {
            let m = defaults::logistic();
            let rhs: Box<dyn Rhs + Send + Sync> = Box::new(m);
            let problem = IvpProblem::new(rhs, 0.0, m.initial, 100.0).expect("valid defaults");
            Some((problem, Box::new(move |t| m.exact(t))))
        }
        "cooling" => {
            let m = defaults::cooling();
            let rhs: Box<dyn Rhs + Send + Sync> = Box::new(m);
            let problem = IvpProblem::new(rhs, 0.0, m.initial, 24.0).expect("valid defaults");
            Some((problem, Box::new(move |t| m.exact(t))))
        }
        "linear" => {
            let rhs: Box<dyn Rhs + Send + Sync> = Box::new(|_x: f64, y: f64| y);
            let problem = IvpProblem::new(rhs, 0.0, 1.0, 1.0).expect("valid interval");
            Some((problem, Box::new(|t: f64| t.exp())))
        }
        _ => None,
    }
}

fn parse_stepper(name: &str) -> Result<OneStepMethod, HarnessError> {
    match name {
        "euler" => Ok(OneStepMethod::Euler),
        "heun" => Ok(OneStepMethod::Heun),
        "midpoint" => Ok(OneStepMethod::Midpoint),
        "rk4" => Ok(OneStepMethod::Rk4),
        other => Err(HarnessError::UnknownStepper(other.to_string())),
    }
}

/// Runs the convergence-order study and returns the orders table.
pub fn convergence_table(
    model: &str,
    stepper_names: &[String],
    h_values: &[f64],
) -> Result<Csv, HarnessError> {
    let (problem, oracle) =
        oracle_problem(model).ok_or_else(|| HarnessError::MissingOracle(model.to_string()))?;

    let mut csv = Csv::new(&["stepper", "h", "error", "observed_order"]);
    csv.comments.push(format!("model: {model}"));
    for name in stepper_names {
        let method = parse_stepper(name)?;
        let samples = estimate_convergence_order(&problem, &oracle, &method, h_values)?;
        for s in samples {
            csv.push_row(vec![
                name.clone(),
                format_real(s.h),
                format_real(s.global_error),
                format_opt_real(s.observed_order),
            ]);
        }
    }
    Ok(csv)
}

/// `odebench convergence`: writes orders.csv into `out_dir`.
pub fn cmd_convergence(
    model: &str,
    stepper_names: &[String],
    h_values: &[f64],
    out_dir: &Path,
) -> Result<PathBuf, HarnessError> {
    let csv = convergence_table(model, stepper_names, h_values)?;
    ensure_dir(out_dir)?;
    let path = out_dir.join(ORDERS_FILE);
    write_csv(&csv, &path)?;
    Ok(path)
}

/// `odebench run`: parse, integrate, write artifacts.
pub fn cmd_run(
    scenario_path: &Path,
    out_dir: &Path,
    solver_filter: Option<&str>,
) -> Result<(RunArtifact, Vec<PathBuf>), HarnessError> {
    let scenario = Scenario::parse_file(scenario_path)?;
    let filter = solver_filter.map(parse_solver_filter).transpose()?;
    let artifact = run_scenario(&scenario, filter.as_deref())?;
    let written = write_run_artifact(&artifact, &scenario, out_dir)?;
    Ok((artifact, written))
}

// ---------------------------------------------------------------------------
// Fixture generation
// ---------------------------------------------------------------------------

/// Deterministic generator for the synthetic reference fixtures.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    fn next_symmetric(&mut self) -> f64 {
        let unit = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        2.0 * unit - 1.0
    }
}

struct FixtureSpec {
    file: &'static str,
    describe: &'static str,
    seed: u64,
    noise_amplitude: f64,
    t_end: f64,
    dt: f64,
    curve: fn(f64) -> f64,
}

fn logistic_curve(t: f64) -> f64 {
    defaults::logistic().exact(t)
}

fn temperature_curve(t: f64) -> f64 {
    defaults::temperature().exact(t)
}

// The singular market model has no usable closed form past its pole; the
// reference data instead follows a stable relaxation toward the equilibrium
// price, which stays finite across the whole window while the model's
// trajectories diverge.
fn market_curve(t: f64) -> f64 {
    let m = defaults::market();
    let p_star = m.equilibrium_price();
    p_star + (m.initial - p_star) * (-t / 5.0).exp()
}

const FIXTURES: [FixtureSpec; 6] = [
    FixtureSpec {
        file: "logistic_experimental.csv",
        describe: "logistic growth curve with measurement noise",
        seed: 42,
        noise_amplitude: 15.0,
        t_end: 100.0,
        dt: 2.0,
        curve: logistic_curve,
    },
    FixtureSpec {
        file: "logistic_empirical.csv",
        describe: "logistic growth curve, noise-free",
        seed: 0,
        noise_amplitude: 0.0,
        t_end: 100.0,
        dt: 1.0,
        curve: logistic_curve,
    },
    FixtureSpec {
        file: "temperature_experimental.csv",
        describe: "building temperature under a sinusoidal ambient, with sensor noise",
        seed: 43,
        noise_amplitude: 0.4,
        t_end: 72.0,
        dt: 1.5,
        curve: temperature_curve,
    },
    FixtureSpec {
        file: "temperature_empirical.csv",
        describe: "building temperature under a sinusoidal ambient, noise-free",
        seed: 0,
        noise_amplitude: 0.0,
        t_end: 72.0,
        dt: 0.5,
        curve: temperature_curve,
    },
    FixtureSpec {
        file: "market_experimental.csv",
        describe: "market price relaxing to equilibrium (stable stand-in series), with noise",
        seed: 44,
        noise_amplitude: 0.05,
        t_end: 20.0,
        dt: 0.5,
        curve: market_curve,
    },
    FixtureSpec {
        file: "market_empirical.csv",
        describe: "market price relaxing to equilibrium (stable stand-in series), noise-free",
        seed: 0,
        noise_amplitude: 0.0,
        t_end: 20.0,
        dt: 0.25,
        curve: market_curve,
    },
];

/// `odebench fixtures`: regenerates the six synthetic reference CSVs.
/// Fixed seeds make the files byte-identical across runs.
pub fn cmd_fixtures(out_dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    ensure_dir(out_dir)?;
    let mut written = Vec::with_capacity(FIXTURES.len());
    for spec in &FIXTURES {
        let mut csv = Csv::new(&["t", "value"]);
        csv.comments.push(format!("synthetic reference fixture: {}", spec.describe));
        csv.comments.push(format!(
            "generator: splitmix64(seed={}), uniform noise amplitude {}",
            spec.seed, spec.noise_amplitude
        ));
        let mut rng = SplitMix64(spec.seed);
        let n = (spec.t_end / spec.dt).round() as u64;
        for i in 0..=n {
            let t = i as f64 * spec.dt;
            let noise = if spec.noise_amplitude > 0.0 {
                spec.noise_amplitude * rng.next_symmetric()
            } else {
                0.0
            };
            csv.push_row(vec![format_real(t), format_real((spec.curve)(t) + noise)]);
        }
        let path = out_dir.join(spec.file);
        write_csv(&csv, &path)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::TrajectoryStatus;
    use std::fs;

    fn scenario_from(text: &str, base: &Path) -> Scenario {
        Scenario::parse_str(text, "test", base, "test.toml").unwrap()
    }

    const LOGISTIC_BODY: &str = r#"
[problem]
x0 = 0.0
x_end = 100.0
h = 0.025

[model]
kind = "logistic"
growth_rate = 0.1
capacity = 1000.0
initial = 100.0

[solvers]
list = "euler,heun,midpoint,rk4,rk45"
"#;

    const MARKET_BODY: &str = r#"
[problem]
x0 = 0.0
x_end = 20.0
h = 0.1

[model]
kind = "market"
adjust_speed = 1.0
demand_intercept = 10.0
demand_slope = 1.0
supply_intercept = 2.0
supply_slope = 1.0
pole_start = -10.0
pole_rate = -1.0
initial = 3.0

[solvers]
list = "euler,heun,midpoint,rk4,rk45"
"#;

    #[test]
    fn logistic_solvers_stay_close_and_costs_rank() {
        let scenario = scenario_from(LOGISTIC_BODY, Path::new("."));
        let artifact = run_scenario(&scenario, None).unwrap();
        assert_eq!(artifact.runs.len(), 5);

        // all five complete
        for run in &artifact.runs {
            assert!(run.trajectory.status.is_completed(), "{} failed", run.solver);
        }

        // max pairwise relative deviation on the shared grid
        let grid = fixed_grid(scenario.x0, scenario.x_end, scenario.h);
        let mut max_dev: f64 = 0.0;
        for &t in &grid {
            let values: Vec<f64> =
                artifact.runs.iter().map(|r| r.trajectory.interpolate(t).unwrap()).collect();
            for i in 0..values.len() {
                for j in (i + 1)..values.len() {
                    let dev = (values[i] - values[j]).abs()
                        / values[i].abs().max(values[j].abs()).max(1e-300);
                    max_dev = max_dev.max(dev);
                }
            }
        }
        assert!(max_dev < 1e-3, "max pairwise deviation {max_dev}");

        // cost ordering: euler <= heun == midpoint <= rk4 <= adaptive total
        let evals: Vec<u64> =
            artifact.runs.iter().map(|r| r.trajectory.stats.rhs_evaluations).collect();
        let (euler, heun, midpoint, rk4, rk45) =
            (evals[0], evals[1], evals[2], evals[3], evals[4]);
        assert!(euler < heun, "euler {euler} !< heun {heun}");
        assert_eq!(heun, midpoint);
        assert!(midpoint < rk4);
        assert!(rk4 <= rk45, "rk4 {rk4} !<= rk45 {rk45}");
    }

    #[test]
    fn market_scenario_fails_universally_with_flags() {
        let dir = tempfile::tempdir().unwrap();
        // references spanning the full window, generated by the fixture writer
        let fixture_dir = dir.path().join("fixtures");
        cmd_fixtures(&fixture_dir).unwrap();
        let body = format!(
            "{MARKET_BODY}\n[reference]\nexperimental = \"fixtures/market_experimental.csv\"\nempirical = \"fixtures/market_empirical.csv\"\n"
        );
        let scenario = scenario_from(&body, dir.path());
        let artifact = run_scenario(&scenario, None).unwrap();

        for run in &artifact.runs {
            assert!(
                run.trajectory.status.is_failure(),
                "{} unexpectedly completed",
                run.solver
            );
            let x_fail = run.trajectory.status.x_fail().unwrap();
            assert!(x_fail < scenario.x_end, "{}: x_fail={x_fail}", run.solver);
            for (kind, report) in &run.reports {
                assert!(report.blowup_truncated, "{} vs {:?} not flagged", run.solver, kind);
            }
        }
    }

    #[test]
    fn unknown_solver_filter_is_named() {
        let err = parse_solver_filter("euler,warp9").unwrap_err();
        assert!(err.to_string().contains("warp9"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn artifacts_round_trip_and_are_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        cmd_fixtures(&dir.path().join("fixtures")).unwrap();
        let scenario_text = format!(
            "{}\n[reference]\nexperimental = \"fixtures/logistic_experimental.csv\"\nempirical = \"fixtures/logistic_empirical.csv\"\n",
            LOGISTIC_BODY.replace("h = 0.025", "h = 0.5")
        );
        let scenario = scenario_from(&scenario_text, dir.path());
        let artifact = run_scenario(&scenario, None).unwrap();

        let out_a = dir.path().join("a");
        let out_b = dir.path().join("b");
        write_run_artifact(&artifact, &scenario, &out_a).unwrap();
        let artifact2 = run_scenario(&scenario, None).unwrap();
        write_run_artifact(&artifact2, &scenario, &out_b).unwrap();

        for file in [TRAJECTORIES_FILE, ERRORS_FILE, PLOT_FILE] {
            let a = fs::read(out_a.join(file)).unwrap();
            let b = fs::read(out_b.join(file)).unwrap();
            assert_eq!(a, b, "{file} differs between identical runs");
        }
        // costs.csv is deterministic except for the wall-clock column
        let strip_wall = |path: &Path| {
            let csv = Csv::read_from(path).unwrap();
            let wall = csv.column("wall_ms").unwrap();
            csv.rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(i, _)| *i != wall)
                        .map(|(_, c)| c.clone())
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(strip_wall(&out_a.join(COSTS_FILE)), strip_wall(&out_b.join(COSTS_FILE)));

        // every emitted CSV parses through the module's own reader
        for file in [TRAJECTORIES_FILE, ERRORS_FILE, COSTS_FILE] {
            let csv = Csv::read_from(&out_a.join(file)).unwrap();
            assert!(!csv.rows.is_empty(), "{file} empty");
        }
    }

    #[test]
    fn trajectories_csv_carries_reference_columns() {
        let dir = tempfile::tempdir().unwrap();
        cmd_fixtures(&dir.path().join("fixtures")).unwrap();
        let body = format!(
            "{}\n[reference]\nempirical = \"fixtures/logistic_empirical.csv\"\n",
            LOGISTIC_BODY.replace("h = 0.025", "h = 1.0")
        );
        let scenario = scenario_from(&body, dir.path());
        let artifact = run_scenario(&scenario, None).unwrap();
        let csv = trajectories_csv(&artifact, &scenario);
        assert_eq!(
            csv.header,
            vec!["t", "euler", "heun", "midpoint", "rk4", "rk45", "empirical"]
        );
        assert_eq!(csv.rows.len(), 101);
        // empirical column is populated at grid times inside its range
        let col = csv.column("empirical").unwrap();
        assert!(csv.rows.iter().all(|r| !r[col].is_empty()));
    }

    #[test]
    fn fixtures_are_deterministic_and_well_formed() {
        let dir = tempfile::tempdir().unwrap();
        let first = cmd_fixtures(&dir.path().join("one")).unwrap();
        let second = cmd_fixtures(&dir.path().join("two")).unwrap();
        assert_eq!(first.len(), 6);
        for (a, b) in first.iter().zip(&second) {
            let bytes_a = fs::read(a).unwrap();
            let bytes_b = fs::read(b).unwrap();
            assert_eq!(bytes_a, bytes_b, "{} not deterministic", a.display());
        }
        // header line and noise bound against the clean curve
        for path in &first {
            let csv = Csv::read_from(path).unwrap();
            assert_eq!(csv.header, vec!["t", "value"]);
            let series = read_reference_csv(path, SeriesKind::Experimental).unwrap();
            assert!(series.points().len() > 10);
        }
        let noisy = read_reference_csv(
            &dir.path().join("one/logistic_experimental.csv"),
            SeriesKind::Experimental,
        )
        .unwrap();
        for &(t, v) in noisy.points() {
            let clean = defaults::logistic().exact(t);
            assert!((v - clean).abs() <= 15.0 + 1e-9, "noise exceeds amplitude at t={t}");
        }
    }

    #[test]
    fn convergence_orders_cover_expected_bands() {
        let steppers: Vec<String> =
            ["euler", "heun", "midpoint", "rk4"].iter().map(|s| s.to_string()).collect();
        let csv = convergence_table("linear", &steppers, &[0.1, 0.05, 0.025]).unwrap();
        let order_col = csv.column("observed_order").unwrap();
        let stepper_col = csv.column("stepper").unwrap();
        let expect = |name: &str, lo: f64, hi: f64| {
            let orders: Vec<f64> = csv
                .rows
                .iter()
                .filter(|r| r[stepper_col] == name && !r[order_col].is_empty())
                .map(|r| r[order_col].parse().unwrap())
                .collect();
            assert!(!orders.is_empty());
            for o in orders {
                assert!((lo..=hi).contains(&o), "{name} order {o} outside [{lo}, {hi}]");
            }
        };
        expect("euler", 0.9, 1.1);
        expect("heun", 1.9, 2.1);
        expect("midpoint", 1.9, 2.1);
        expect("rk4", 3.8, 4.2);
    }

    #[test]
    fn convergence_logistic_defaults_match_coarse_bands() {
        let steppers = vec!["euler".to_string(), "rk4".to_string()];
        let csv = convergence_table("logistic", &steppers, &[1.0, 0.5, 0.25]).unwrap();
        let order_col = csv.column("observed_order").unwrap();
        let stepper_col = csv.column("stepper").unwrap();
        for row in &csv.rows {
            if row[order_col].is_empty() {
                continue;
            }
            let order: f64 = row[order_col].parse().unwrap();
            match row[stepper_col].as_str() {
                "euler" => assert!((0.8..=1.2).contains(&order), "euler {order}"),
                "rk4" => assert!((3.6..=4.4).contains(&order), "rk4 {order}"),
                other => panic!("unexpected stepper {other}"),
            }
        }
    }

    #[test]
    fn midpoint_and_heun_orders_agree() {
        let steppers = vec!["heun".to_string(), "midpoint".to_string()];
        let csv = convergence_table("linear", &steppers, &[0.1, 0.05]).unwrap();
        let order_col = csv.column("observed_order").unwrap();
        let orders: Vec<f64> = csv
            .rows
            .iter()
            .filter(|r| !r[order_col].is_empty())
            .map(|r| r[order_col].parse().unwrap())
            .collect();
        assert_eq!(orders.len(), 2);
        assert!((orders[0] - orders[1]).abs() < 0.1);
    }

    #[test]
    fn convergence_rejects_models_without_oracle() {
        let err =
            convergence_table("market", &["euler".to_string()], &[0.1, 0.05]).unwrap_err();
        assert!(matches!(err, HarnessError::MissingOracle(_)));
        assert_eq!(err.exit_code(), 2);
        let err = convergence_table("linear", &["rk45".to_string()], &[0.1, 0.05]).unwrap_err();
        assert!(matches!(err, HarnessError::UnknownStepper(_)));
    }

    #[test]
    fn solver_filter_subsets_a_run() {
        let scenario = scenario_from(&LOGISTIC_BODY.replace("h = 0.025", "h = 1.0"), Path::new("."));
        let filter = parse_solver_filter("rk4,euler").unwrap();
        let artifact = run_scenario(&scenario, Some(&filter)).unwrap();
        assert_eq!(artifact.runs.len(), 2);
        assert_eq!(artifact.runs[0].solver, SolverKind::Rk4);
        assert_eq!(artifact.runs[1].solver, SolverKind::Euler);
    }

    #[test]
    fn adaptive_market_run_reports_failure_point_near_pole() {
        let scenario = scenario_from(MARKET_BODY, Path::new("."));
        let artifact =
            run_scenario(&scenario, Some(&[SolverKind::Rk45])).unwrap();
        let run = &artifact.runs[0];
        match run.trajectory.status {
            TrajectoryStatus::BlowUp { x_fail } | TrajectoryStatus::StepUnderflow { x_fail } => {
                assert!((9.0..10.5).contains(&x_fail), "x_fail={x_fail}");
            }
            TrajectoryStatus::Completed => panic!("rk45 should not survive the pole"),
        }
    }
}
