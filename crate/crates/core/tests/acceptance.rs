//! Acceptance suite: one test per release criterion, every tolerance
//! pinned in code. Each test prints its own pass line; `cargo test` shows
//! one ok/FAILED line per criterion either way.

use std::path::{Path, PathBuf};
use std::process::Command;

use odebench::analysis::{error_wrt_reference, estimate_convergence_order};
use odebench::harness::run_scenario;
use odebench::problem::{CorrectorConfig, IvpProblem};
use odebench::scenario::Scenario;
use odebench::steppers::{euler_step, heun_step, midpoint_step, rk4_step, OneStepMethod};
use odebench::tableau::{general_rk_step, ButcherTableau};
use odebench::truncation::estimate_local_truncation_error;
use odebench::{integrate_adaptive, AdaptiveConfig};

// frozen oracle value, identical bits to std::f64::consts::E
#[allow(clippy::approx_constant)]
const E: f64 = 2.718281828459045;

fn scenario(name: &str) -> Scenario {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name);
    Scenario::parse_file(&path).expect("shipped scenario parses")
}

/// Deterministic point generator for the randomized criteria.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_unit(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        ((z ^ (z >> 31)) >> 11) as f64 / (1u64 << 53) as f64
    }
}

#[test]
fn criterion_01_step_formula_oracles() {
    // Hand-derived one-step values on f(x,y)=y, y=1, h=0.1.
    let rhs = |_x: f64, y: f64| y;
    let cases = [
        ("euler", euler_step(&rhs, 0.0, 1.0, 0.1).unwrap().y_next, 1.1),
        ("heun", heun_step(&rhs, 0.0, 1.0, 0.1, None).unwrap().y_next, 1.105),
        ("midpoint", midpoint_step(&rhs, 0.0, 1.0, 0.1).unwrap().y_next, 1.105),
        ("rk4", rk4_step(&rhs, 0.0, 1.0, 0.1).unwrap().y_next, 1.1051708333333333),
    ];
    for (name, got, expected) in cases {
        assert!((got - expected).abs() < 1e-12, "{name}: {got} vs {expected}");
    }
    println!("criterion 01 PASS: step-formula oracles match to 1e-12");
}

#[test]
fn criterion_02_generalized_rk_equivalence() {
    let fns: [&dyn Fn(f64, f64) -> f64; 3] = [
        &|x, y| x.sin() * y.cos(),
        &|x, y| x * x - 0.5 * y,
        &|x, y| (-0.3 * y).exp() + x,
    ];
    let tableaus = [
        (ButcherTableau::euler(), 0usize),
        (ButcherTableau::heun(), 1),
        (ButcherTableau::classical_rk4(), 2),
    ];
    let mut rng = SplitMix64(7);
    for rhs in fns {
        for _ in 0..1000 {
            let x = rng.next_unit() * 4.0 - 2.0;
            let y = rng.next_unit() * 4.0 - 2.0;
            let h = rng.next_unit() * 0.5 + 1e-4;
            for (tableau, which) in &tableaus {
                let general = general_rk_step(tableau, &rhs, x, y, h).unwrap().y_next;
                let dedicated = match which {
                    0 => euler_step(&rhs, x, y, h).unwrap().y_next,
                    1 => heun_step(&rhs, x, y, h, None).unwrap().y_next,
                    _ => rk4_step(&rhs, x, y, h).unwrap().y_next,
                };
                assert_eq!(
                    general.to_bits(),
                    dedicated.to_bits(),
                    "tableau {which} diverges at ({x}, {y}, {h})"
                );
            }
        }
    }
    println!("criterion 02 PASS: tableau engine matches dedicated steppers bit-for-bit on 3000 points");
}

#[test]
fn criterion_03_convergence_orders() {
    let problem = IvpProblem::new(|_x, y: f64| y, 0.0, 1.0, 1.0).unwrap();
    let h_values = [0.1, 0.05, 0.025];
    let bands = [
        (OneStepMethod::Euler, 1.0, 0.1),
        (OneStepMethod::Heun, 2.0, 0.1),
        (OneStepMethod::Midpoint, 2.0, 0.1),
        (OneStepMethod::Rk4, 4.0, 0.2),
    ];
    for (method, expected, tol) in bands {
        let samples =
            estimate_convergence_order(&problem, |x| x.exp(), &method, &h_values).unwrap();
        for s in &samples[..samples.len() - 1] {
            let order = s.observed_order.expect("nonzero errors on y'=y");
            assert!(
                (order - expected).abs() <= tol,
                "{}: observed {order}, want {expected}±{tol}",
                method.name()
            );
        }
    }
    println!("criterion 03 PASS: observed orders 1/2/2/4 within bands");
}

#[test]
fn criterion_04_adaptive_accuracy() {
    let problem = IvpProblem::new(|_x, y: f64| y, 0.0, 1.0, 1.0).unwrap();
    let config = AdaptiveConfig { rel_tol: 1e-8, ..AdaptiveConfig::default() };
    let traj = integrate_adaptive(&problem, &config).unwrap();
    assert!(traj.status.is_completed());
    let error = (traj.last().1 - E).abs();
    assert!(error < 1e-7, "final error {error}");
    assert!(traj.stats.steps_accepted < 50, "{} accepted steps", traj.stats.steps_accepted);
    println!(
        "criterion 04 PASS: |y(1) - e| = {error:.3e} in {} accepted steps",
        traj.stats.steps_accepted
    );
}

#[test]
fn criterion_05_logistic_closeness_and_cost_rank() {
    let scenario = scenario("logistic.toml");
    let artifact = run_scenario(&scenario, None).unwrap();
    assert_eq!(artifact.runs.len(), 5);
    for run in &artifact.runs {
        assert!(run.trajectory.status.is_completed(), "{} failed", run.solver);
    }

    let grid = odebench::fixed_grid(scenario.x0, scenario.x_end, scenario.h);
    let mut max_dev: f64 = 0.0;
    for &t in &grid {
        let values: Vec<f64> =
            artifact.runs.iter().map(|r| r.trajectory.interpolate(t).unwrap()).collect();
        for i in 0..values.len() {
            for j in (i + 1)..values.len() {
                let dev =
                    (values[i] - values[j]).abs() / values[i].abs().max(values[j].abs());
                max_dev = max_dev.max(dev);
            }
        }
    }
    assert!(max_dev < 1e-3, "max pairwise relative deviation {max_dev}");

    let evals =
        |k: usize| artifact.runs[k].trajectory.stats.rhs_evaluations;
    // scenario order: euler, heun, midpoint, rk4, rk45
    assert!(evals(0) < evals(1), "euler !< heun");
    assert!(evals(0) < evals(2), "euler !< midpoint");
    assert!(evals(1) < evals(3) && evals(2) < evals(3), "heun/midpoint !< rk4");
    println!(
        "criterion 05 PASS: max pairwise deviation {max_dev:.2e}, costs ranked {} < {} = {} < {}",
        evals(0),
        evals(1),
        evals(2),
        evals(3)
    );
}

#[test]
fn criterion_06_market_universal_failure() {
    let scenario = scenario("market.toml");
    let artifact = run_scenario(&scenario, None).unwrap();
    assert_eq!(artifact.runs.len(), 5);
    assert!(!artifact.references.is_empty(), "market scenario ships reference data");
    for run in &artifact.runs {
        let x_fail = run
            .trajectory
            .status
            .x_fail()
            .unwrap_or_else(|| panic!("{} completed past the pole", run.solver));
        assert!(x_fail < scenario.x_end, "{} failed only at the very end", run.solver);
        assert!(!run.reports.is_empty());
        for (kind, report) in &run.reports {
            assert!(
                report.blowup_truncated,
                "{} vs {:?} report lacks the blow-up flag",
                run.solver, kind
            );
        }
    }
    println!("criterion 06 PASS: all five solvers fail before x_end, reports flagged");
}

#[test]
fn criterion_07_error_metric_fidelity() {
    let pairs = [(10.0, 9.0), (20.0, 18.0), (30.0, 27.0)];
    let err = error_wrt_reference(&pairs).unwrap();
    assert_eq!(err, 0.1, "exact signed relative error");

    let identity = [(5.0, 5.0), (9.0, 9.0), (13.5, 13.5)];
    assert_eq!(error_wrt_reference(&identity).unwrap(), 0.0);

    let mut rng = SplitMix64(11);
    for _ in 0..100 {
        let c = rng.next_unit() * 100.0 + 1e-3;
        let scaled: Vec<(f64, f64)> = pairs.iter().map(|&(r, x)| (c * r, c * x)).collect();
        let scaled_err = error_wrt_reference(&scaled).unwrap();
        assert!(
            (scaled_err - err).abs() <= 1e-12,
            "scaling by {c} moved the metric to {scaled_err}"
        );
    }
    println!("criterion 07 PASS: signed metric exact, scale-equivariant over 100 scalings");
}

#[test]
fn criterion_08_heun_corrector_contraction() {
    // On y' = -y the corrector map is affine with slope -h/2; successive
    // iterates form a geometric sequence with that ratio.
    let rhs = |_x: f64, y: f64| -y;
    let h = 0.1;
    let tiny = CorrectorConfig::new(0, 1e-300).unwrap();

    let iterate = |max_iters: u32| {
        let cfg = CorrectorConfig { max_iters, ..tiny };
        heun_step(&rhs, 0.0, 1.0, h, Some(cfg)).unwrap()
    };
    let y1 = iterate(0).y_next;
    let y2 = iterate(1).y_next;
    let y3 = iterate(2).y_next;
    let y4 = iterate(3).y_next;

    let ratio_a = (y3 - y2) / (y2 - y1);
    let ratio_b = (y4 - y3) / (y3 - y2);
    for ratio in [ratio_a, ratio_b] {
        assert!((ratio - (-h / 2.0)).abs() < 1e-6, "ratio {ratio} vs {}", -h / 2.0);
    }

    let mut last_eps = f64::INFINITY;
    for iters in 1..=6 {
        let eps = iterate(iters).final_epsilon_a.unwrap();
        assert!(eps < last_eps, "ε_a not monotone: {eps} !< {last_eps}");
        last_eps = eps;
    }
    println!("criterion 08 PASS: corrector ratio {ratio_a:.8} ~ -0.05, ε_a monotone");
}

#[test]
fn criterion_09_truncation_error_scales_as_h_squared() {
    let fns: [&dyn Fn(f64, f64) -> f64; 3] = [
        &|x, y| x.sin() + y * y,
        &|x, y| x * y + 1.0,
        &|x, y| (0.5 * y).exp() - 2.0 * x,
    ];
    for (i, rhs) in fns.iter().enumerate() {
        for h in [0.4, 0.2, 0.1] {
            let full = estimate_local_truncation_error(rhs, 0.7, 0.4, h).unwrap();
            let half = estimate_local_truncation_error(rhs, 0.7, 0.4, h / 2.0).unwrap();
            let ratio = full / half;
            assert!((ratio - 4.0).abs() <= 0.04, "fn {i} at h={h}: ratio {ratio}");
        }
    }
    println!("criterion 09 PASS: E_a halving ratio 4.0±0.04 on three smooth rhs");
}

#[test]
fn criterion_10_end_to_end_determinism() {
    let scenarios_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let tmp = tempfile::tempdir().unwrap();
    for name in ["logistic.toml", "temperature.toml", "market.toml"] {
        let mut outputs: Vec<PathBuf> = Vec::new();
        for round in 0..2 {
            let out = tmp.path().join(format!("{name}.{round}"));
            let output = Command::new(env!("CARGO_BIN_EXE_odebench"))
                .arg("run")
                .arg(scenarios_dir.join(name))
                .arg("--out")
                .arg(&out)
                .output()
                .unwrap();
            assert!(output.status.success(), "run failed for {name}");
            outputs.push(out);
        }
        for file in ["trajectories.csv", "errors.csv", "plot.svg"] {
            let a = std::fs::read(outputs[0].join(file)).unwrap();
            let b = std::fs::read(outputs[1].join(file)).unwrap();
            assert_eq!(a, b, "{name}/{file} differs between runs");
        }
        // costs.csv: identical after dropping the wall-clock column
        let strip = |p: &Path| {
            let text = std::fs::read_to_string(p.join("costs.csv")).unwrap();
            text.lines()
                .map(|l| l.rsplit_once(',').map(|(head, _)| head.to_string()).unwrap_or_default())
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&outputs[0]), strip(&outputs[1]), "{name}/costs.csv differs");
    }
    println!("criterion 10 PASS: byte-identical artifacts across repeated runs");
}
