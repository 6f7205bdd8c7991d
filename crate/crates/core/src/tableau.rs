//! Tableau-driven general explicit Runge-Kutta engine.
//!
//! An n-stage explicit method is given by weights `a_1..a_n`, nodes
//! `p_1..p_{n-1}`, and a strictly lower-triangular coupling matrix `q`:
//!
//! ```text
//! k_1 = f(x, y)
//! k_j = f(x + p_{j-1}·h,  y + (q_{j-1,1}·k_1 + … + q_{j-1,j-1}·k_{j-1})·h)
//! y_next = y + (a_1·k_1 + … + a_n·k_n)·h
//! ```
//!
//! Zero coefficients are skipped during accumulation, so on the Euler, Heun,
//! midpoint, and classical RK4 tableaus the engine performs exactly the same
//! floating-point operations as the dedicated steppers and reproduces them
//! bit-for-bit.

use thiserror::Error;

use crate::problem::Rhs;
use crate::steppers::{eval_checked, StepError, StepResult};

/// Coefficients of an explicit Runge-Kutta method.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    weights: Vec<f64>,
    nodes: Vec<f64>,
    coupling: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TableauError {
    #[error("a tableau needs at least one stage")]
    Empty,
    #[error("expected {expected} nodes for {stages} stages, got {got}")]
    NodeCount { stages: usize, expected: usize, got: usize },
    #[error("coupling row {row} must have {expected} entries, got {got}")]
    RowLength { row: usize, expected: usize, got: usize },
    #[error("weights must sum to 1 (got {sum}); the method would not be consistent")]
    Inconsistent { sum: f64 },
    #[error("tableau coefficients must be finite")]
    NonFinite,
}

impl ButcherTableau {
    /// Validates and builds a tableau. `coupling` holds one row per stage
    /// after the first; row `i` (0-based) feeds stage `i + 2` and has
    /// `i + 1` entries.
    pub fn new(
        weights: Vec<f64>,
        nodes: Vec<f64>,
        coupling: Vec<Vec<f64>>,
    ) -> Result<Self, TableauError> {
        let stages = weights.len();
        if stages == 0 {
            return Err(TableauError::Empty);
        }
        if nodes.len() != stages - 1 {
            return Err(TableauError::NodeCount {
                stages,
                expected: stages - 1,
                got: nodes.len(),
            });
        }
        if coupling.len() != stages - 1 {
            return Err(TableauError::RowLength {
                row: 0,
                expected: stages - 1,
                got: coupling.len(),
            });
        }
        for (i, row) in coupling.iter().enumerate() {
            if row.len() != i + 1 {
                return Err(TableauError::RowLength { row: i, expected: i + 1, got: row.len() });
            }
        }
        let all = weights
            .iter()
            .chain(nodes.iter())
            .chain(coupling.iter().flatten());
        if !all.clone().all(|c| c.is_finite()) {
            return Err(TableauError::NonFinite);
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(TableauError::Inconsistent { sum });
        }
        Ok(Self { weights, nodes, coupling })
    }

    pub fn stages(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn coupling(&self) -> &[Vec<f64>] {
        &self.coupling
    }

    /// One-stage tableau: Euler's method.
    pub fn euler() -> Self {
        Self::new(vec![1.0], vec![], vec![]).expect("valid by construction")
    }

    /// Two-stage trapezoidal tableau: Heun's method (single corrector pass).
    pub fn heun() -> Self {
        Self::new(vec![0.5, 0.5], vec![1.0], vec![vec![1.0]]).expect("valid by construction")
    }

    /// Two-stage midpoint tableau.
    pub fn midpoint() -> Self {
        Self::new(vec![0.0, 1.0], vec![0.5], vec![vec![0.5]]).expect("valid by construction")
    }

    /// The classical fourth-order tableau.
    pub fn classical_rk4() -> Self {
        Self::new(
            vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
            vec![0.5, 0.5, 1.0],
            vec![vec![0.5], vec![0.0, 0.5], vec![0.0, 0.0, 1.0]],
        )
        .expect("valid by construction")
    }
}

/// Advances one step of the method described by `tableau`.
///
/// Performs exactly `stages` rhs evaluations; the k's are computed by the
/// recurrence above, each depending only on earlier stages.
pub fn general_rk_step<R: Rhs + ?Sized>(
    tableau: &ButcherTableau,
    rhs: &R,
    x: f64,
    y: f64,
    h: f64,
) -> Result<StepResult, StepError> {
    let n = tableau.stages();
    let mut k = Vec::with_capacity(n);
    k.push(eval_checked(rhs, x, y)?);

    for j in 1..n {
        let row = &tableau.coupling[j - 1];
        let y_stage = y + weighted_sum(row, &k) * h;
        let x_stage = x + tableau.nodes[j - 1] * h;
        k.push(eval_checked(rhs, x_stage, y_stage)?);
    }

    let phi = weighted_sum(&tableau.weights, &k);
    Ok(StepResult {
        y_next: y + phi * h,
        rhs_evaluations: n as u32,
        corrector_iterations: 0,
        final_epsilon_a: None,
    })
}

// Skips exact-zero coefficients so sparse tableaus accumulate the same term
// sequence as hand-unrolled code.
fn weighted_sum(coeffs: &[f64], k: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&c, &kj) in coeffs.iter().zip(k) {
        if c != 0.0 {
            acc += c * kj;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steppers::{euler_step, heun_step, midpoint_step, rk4_step};

    #[test]
    fn rejects_inconsistent_weights() {
        let err = ButcherTableau::new(vec![0.5, 0.4], vec![1.0], vec![vec![1.0]]).unwrap_err();
        assert!(matches!(err, TableauError::Inconsistent { .. }));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(ButcherTableau::new(vec![], vec![], vec![]), Err(TableauError::Empty)));
        assert!(ButcherTableau::new(vec![1.0], vec![0.5], vec![]).is_err());
        assert!(ButcherTableau::new(vec![0.5, 0.5], vec![1.0], vec![vec![1.0, 2.0]]).is_err());
        assert!(ButcherTableau::new(vec![0.5, 0.5], vec![f64::NAN], vec![vec![1.0]]).is_err());
    }

    #[test]
    fn single_stage_tableau_is_euler() {
        // The n=1 method with a=[1] is Euler's method.
        let tableau = ButcherTableau::euler();
        let rhs = |x: f64, y: f64| x * y + 1.0;
        let general = general_rk_step(&tableau, &rhs, 0.3, 2.0, 0.05).unwrap();
        let dedicated = euler_step(&rhs, 0.3, 2.0, 0.05).unwrap();
        assert_eq!(general.y_next.to_bits(), dedicated.y_next.to_bits());
        assert_eq!(general.rhs_evaluations, 1);
    }

    #[test]
    fn heun_tableau_hand_value() {
        let r = general_rk_step(&ButcherTableau::heun(), &|_x, y: f64| y, 0.0, 1.0, 0.1).unwrap();
        assert!((r.y_next - 1.105).abs() < 1e-15);
    }

    #[test]
    fn rk4_tableau_hand_value() {
        let r =
            general_rk_step(&ButcherTableau::classical_rk4(), &|_x, y: f64| y, 0.0, 1.0, 0.1)
                .unwrap();
        assert!((r.y_next - 1.1051708333333333).abs() < 1e-15);
    }

    #[test]
    fn tableaus_reproduce_dedicated_steppers_bitwise() {
        let fns: [&dyn Fn(f64, f64) -> f64; 3] = [
            &|x, y| x.sin() * y.cos(),
            &|x, y| x * x - y,
            &|x, y| (-y).exp() + 0.5 * x,
        ];
        // Deterministic pseudo-random sweep over (x, y, h).
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            (z ^ (z >> 31)) as f64 / u64::MAX as f64
        };
        for rhs in fns {
            for _ in 0..200 {
                let x = next() * 4.0 - 2.0;
                let y = next() * 4.0 - 2.0;
                let h = next() * 0.5 + 1e-3;
                let pairs = [
                    (
                        general_rk_step(&ButcherTableau::euler(), &rhs, x, y, h).unwrap(),
                        euler_step(&rhs, x, y, h).unwrap(),
                    ),
                    (
                        general_rk_step(&ButcherTableau::heun(), &rhs, x, y, h).unwrap(),
                        heun_step(&rhs, x, y, h, None).unwrap(),
                    ),
                    (
                        general_rk_step(&ButcherTableau::midpoint(), &rhs, x, y, h).unwrap(),
                        midpoint_step(&rhs, x, y, h).unwrap(),
                    ),
                    (
                        general_rk_step(&ButcherTableau::classical_rk4(), &rhs, x, y, h).unwrap(),
                        rk4_step(&rhs, x, y, h).unwrap(),
                    ),
                ];
                for (general, dedicated) in pairs {
                    assert_eq!(
                        general.y_next.to_bits(),
                        dedicated.y_next.to_bits(),
                        "mismatch at x={x}, y={y}, h={h}"
                    );
                    assert_eq!(general.rhs_evaluations, dedicated.rhs_evaluations);
                }
            }
        }
    }

    #[test]
    fn non_finite_stage_is_reported() {
        let rhs = |x: f64, _y: f64| 1.0 / x;
        // Stage 2 of the midpoint tableau evaluates at x + h/2 = 0.
        let err = general_rk_step(&ButcherTableau::midpoint(), &rhs, -0.05, 1.0, 0.1).unwrap_err();
        assert!(matches!(err, StepError::NonFiniteEvaluation { .. }));
    }
}
