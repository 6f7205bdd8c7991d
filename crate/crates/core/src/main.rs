//! `odebench`: compare explicit ODE solvers on benchmark scenarios.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use odebench::harness::{self, HarnessError};
use odebench::problem::TrajectoryStatus;

#[derive(Parser)]
#[command(
    name = "odebench",
    version,
    about = "Run explicit ODE solvers on benchmark scenarios and compare their errors and costs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file: integrate each selected solver, score it
    /// against the reference series, and write trajectories.csv,
    /// errors.csv, costs.csv and plot.svg.
    Run {
        /// Scenario file (sectioned key-value text; see scenarios/).
        scenario: PathBuf,
        /// Output directory for the artifacts.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// Comma-separated solvers to run (euler,heun,midpoint,rk4,rk45),
        /// overriding the scenario's list.
        #[arg(long, value_name = "LIST")]
        solvers: Option<String>,
    },
    /// Measure observed convergence orders against an analytic oracle and
    /// write orders.csv.
    Convergence {
        /// Model with an oracle: logistic, cooling or linear.
        #[arg(long, value_name = "NAME")]
        model: String,
        /// Comma-separated fixed-step methods (euler,heun,midpoint,rk4).
        #[arg(long, value_name = "LIST")]
        steppers: String,
        /// Comma-separated step sizes, strictly decreasing (e.g. 0.1,0.05).
        #[arg(long = "h", value_name = "LIST")]
        h_list: String,
        /// Output directory.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Regenerate the synthetic reference fixtures (deterministic seeds).
    Fixtures {
        /// Output directory.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("odebench: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run { scenario, out, solvers } => {
            let (artifact, written) = harness::cmd_run(&scenario, &out, solvers.as_deref())?;
            for run in &artifact.runs {
                let stats = &run.trajectory.stats;
                let outcome = match run.trajectory.status {
                    TrajectoryStatus::Completed => "completed".to_string(),
                    TrajectoryStatus::BlowUp { x_fail } => format!("blew up at t={x_fail:.6}"),
                    TrajectoryStatus::StepUnderflow { x_fail } => {
                        format!("step underflow at t={x_fail:.6}")
                    }
                };
                println!(
                    "{:<8} {outcome} ({} rhs evaluations, {} steps, {:.2} ms)",
                    run.solver.name(),
                    stats.rhs_evaluations,
                    stats.steps_accepted,
                    run.wall_ms
                );
            }
            for path in written {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Convergence { model, steppers, h_list, out } => {
            let stepper_names: Vec<String> = split_list(&steppers);
            let h_values = parse_h_list(&h_list)?;
            let path = harness::cmd_convergence(&model, &stepper_names, &h_values, &out)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Fixtures { out } => {
            for path in harness::cmd_fixtures(&out)? {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn parse_h_list(text: &str) -> Result<Vec<f64>, HarnessError> {
    let mut values = Vec::new();
    for token in split_list(text) {
        let v: f64 = token
            .parse()
            .map_err(|_| HarnessError::InvalidArgument(format!("cannot parse step size `{token}`")))?;
        values.push(v);
    }
    Ok(values)
}
