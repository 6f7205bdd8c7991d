//! Scenario files: a sectioned key-value format describing one benchmark
//! run (the problem interval and step, the case-study model, the solvers
//! to compare, and optional reference data).
//!
//! ```text
//! [problem]
//! x0 = 0.0
//! x_end = 100.0
//! h = 0.025
//!
//! [model]
//! kind = "logistic"
//! growth_rate = 0.1
//! capacity = 1000.0
//! initial = 100.0
//!
//! [solvers]
//! list = "euler,heun,midpoint,rk4,rk45"
//!
//! [reference]
//! experimental = "../fixtures/logistic_experimental.csv"
//! ```
//!
//! Values may be quoted or bare; `#` lines are comments. Unknown sections
//! and keys are rejected, every numeric field is range-checked, and
//! reference paths resolve relative to the scenario file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::adaptive::AdaptiveConfig;
use crate::analysis::SeriesKind;
use crate::models::{
    AmbientProfile, CaseModel, DemandCurve, LogisticModel, MarketModel, ModelError, MovingPole,
    SupplyCurve, TemperatureModel,
};
use crate::problem::{CorrectorConfig, FixedStepConfig, IvpProblem};

/// One of the five comparable solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Euler,
    Heun,
    Midpoint,
    Rk4,
    Rk45,
}

impl SolverKind {
    pub const ALL: [SolverKind; 5] = [
        SolverKind::Euler,
        SolverKind::Heun,
        SolverKind::Midpoint,
        SolverKind::Rk4,
        SolverKind::Rk45,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Euler => "euler",
            SolverKind::Heun => "heun",
            SolverKind::Midpoint => "midpoint",
            SolverKind::Rk4 => "rk4",
            SolverKind::Rk45 => "rk45",
        }
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self, SolverKind::Rk45)
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euler" => Ok(SolverKind::Euler),
            "heun" => Ok(SolverKind::Heun),
            "midpoint" => Ok(SolverKind::Midpoint),
            "rk4" => Ok(SolverKind::Rk4),
            "rk45" => Ok(SolverKind::Rk45),
            other => Err(format!(
                "unknown solver `{other}` (expected euler, heun, midpoint, rk4 or rk45)"
            )),
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("{path}: field `{field}`: {message}")]
    Validation { path: String, field: String, message: String },
    #[error("cannot read scenario {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A fully validated benchmark scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub x0: f64,
    pub x_end: f64,
    pub h: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub corrector: Option<CorrectorConfig>,
    pub model: CaseModel,
    pub solvers: Vec<SolverKind>,
    /// Reference CSVs, resolved relative to the scenario file.
    pub references: Vec<(SeriesKind, PathBuf)>,
}

impl Scenario {
    pub fn parse_file(path: &Path) -> Result<Self, ScenarioError> {
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path)
            .map_err(|source| ScenarioError::Io { path: display.clone(), source })?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "scenario".to_string());
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse_str(&text, &name, base, &display)
    }

    pub fn parse_str(
        text: &str,
        name: &str,
        base_dir: &Path,
        path_label: &str,
    ) -> Result<Self, ScenarioError> {
        let mut doc = Document::parse(text, path_label)?;

        let problem = doc.section("problem")?;
        let x0 = problem.required_f64("x0")?;
        let x_end = problem.required_f64("x_end")?;
        let h = problem.required_f64("h")?;
        let rel_tol = problem.optional_f64("rel_tol")?.unwrap_or(1e-6);
        let abs_tol = problem.optional_f64("abs_tol")?.unwrap_or(1e-9);
        let corrector_iters = problem.optional_f64("corrector_max_iters")?;
        let corrector_tol = problem.optional_f64("corrector_tol_percent")?;
        problem.finish()?;

        let model_section = doc.section("model")?;
        let model = parse_model(model_section)?;

        let solvers_section = doc.section("solvers")?;
        let list = solvers_section.required_str("list")?;
        solvers_section.finish()?;

        let mut references = Vec::new();
        if let Some(reference) = doc.optional_section("reference") {
            for (kind, key) in
                [(SeriesKind::Experimental, "experimental"), (SeriesKind::Empirical, "empirical")]
            {
                if let Some(rel_path) = reference.optional_str(key)? {
                    references.push((kind, base_dir.join(rel_path)));
                }
            }
            reference.finish()?;
        }
        doc.finish()?;

        let fail = |field: &str, message: String| ScenarioError::Validation {
            path: path_label.to_string(),
            field: field.to_string(),
            message,
        };

        if !x0.is_finite() || !x_end.is_finite() || x_end <= x0 {
            return Err(fail("x_end", format!("interval [{x0}, {x_end}] is empty")));
        }
        if h.is_nan() || h <= 0.0 || h > x_end - x0 {
            return Err(fail("h", format!("step {h} must lie in (0, {}]", x_end - x0)));
        }
        if rel_tol.is_nan() || rel_tol <= 0.0 {
            return Err(fail("rel_tol", "must be > 0".to_string()));
        }
        if abs_tol < 0.0 {
            return Err(fail("abs_tol", "must be >= 0".to_string()));
        }

        let corrector = match (corrector_iters, corrector_tol) {
            (None, None) => None,
            (Some(iters), Some(tol)) => {
                if iters < 0.0 || iters.fract() != 0.0 || iters > u32::MAX as f64 {
                    return Err(fail(
                        "corrector_max_iters",
                        "must be a non-negative integer".to_string(),
                    ));
                }
                Some(CorrectorConfig::new(iters as u32, tol).map_err(|e| {
                    fail("corrector_tol_percent", e.to_string())
                })?)
            }
            _ => {
                return Err(fail(
                    "corrector_max_iters",
                    "corrector_max_iters and corrector_tol_percent must be given together"
                        .to_string(),
                ))
            }
        };

        let mut solvers = Vec::new();
        for token in list.split(',') {
            let token = token.trim();
            if token.is_empty() {
                continue;
            }
            let solver =
                SolverKind::from_str(token).map_err(|message| fail("list", message))?;
            if solvers.contains(&solver) {
                return Err(fail("list", format!("solver `{solver}` listed twice")));
            }
            solvers.push(solver);
        }
        if solvers.is_empty() {
            return Err(fail("list", "at least one solver is required".to_string()));
        }

        Ok(Self {
            name: name.to_string(),
            x0,
            x_end,
            h,
            rel_tol,
            abs_tol,
            corrector,
            model,
            solvers,
            references,
        })
    }

    pub fn span(&self) -> f64 {
        self.x_end - self.x0
    }

    pub fn problem(&self) -> IvpProblem<CaseModel> {
        IvpProblem::new(self.model, self.x0, self.model.initial_value(), self.x_end)
            .expect("validated at parse time")
    }

    pub fn fixed_config(&self) -> FixedStepConfig {
        FixedStepConfig { h: self.h, corrector: self.corrector }
    }

    /// Adaptive settings tied to the scenario grid: the controller starts
    /// at the fixed step and may shrink but not exceed it, so the adaptive
    /// run resolves at least as finely as the fixed-step runs it is
    /// compared with.
    pub fn adaptive_config(&self) -> AdaptiveConfig {
        AdaptiveConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            h_initial: self.h,
            h_min: self.span() * 1e-14,
            h_max: self.h,
            ..AdaptiveConfig::default()
        }
    }
}

fn parse_model(section: &mut Section) -> Result<CaseModel, ScenarioError> {
    let path = section.path.clone();
    let kind = section.required_str("kind")?;
    let map_model_err = |e: ModelError| ScenarioError::Validation {
        path: path.clone(),
        field: e.field.to_string(),
        message: e.reason.to_string(),
    };
    let model = match kind.as_str() {
        "logistic" => {
            let growth_rate = section.required_f64("growth_rate")?;
            let capacity = section.required_f64("capacity")?;
            let initial = section.required_f64("initial")?;
            CaseModel::Logistic(
                LogisticModel::new(growth_rate, capacity, initial).map_err(map_model_err)?,
            )
        }
        "temperature" => {
            let exchange_rate = section.required_f64("exchange_rate")?;
            let initial = section.required_f64("initial")?;
            let ambient = AmbientProfile {
                mean: section.required_f64("ambient_mean")?,
                amplitude: section.required_f64("ambient_amplitude")?,
                period: section.required_f64("ambient_period")?,
            };
            CaseModel::Temperature(
                TemperatureModel::new(exchange_rate, initial, ambient).map_err(map_model_err)?,
            )
        }
        "market" => {
            let adjust_speed = section.required_f64("adjust_speed")?;
            let demand = DemandCurve {
                intercept: section.required_f64("demand_intercept")?,
                slope: section.required_f64("demand_slope")?,
            };
            let supply = SupplyCurve {
                intercept: section.required_f64("supply_intercept")?,
                slope: section.required_f64("supply_slope")?,
            };
            let pole = MovingPole {
                start: section.required_f64("pole_start")?,
                rate: section.required_f64("pole_rate")?,
            };
            let initial = section.required_f64("initial")?;
            CaseModel::Market(
                MarketModel::new(adjust_speed, demand, supply, pole, initial)
                    .map_err(map_model_err)?,
            )
        }
        other => {
            return Err(ScenarioError::Validation {
                path,
                field: "kind".to_string(),
                message: format!(
                    "unknown model `{other}` (expected logistic, temperature or market)"
                ),
            })
        }
    };
    section.finish()?;
    Ok(model)
}

// ---------------------------------------------------------------------------
// Low-level sectioned key-value document
// ---------------------------------------------------------------------------

struct Entry {
    key: String,
    value: String,
    line: usize,
    consumed: bool,
}

struct Section {
    name: String,
    path: String,
    entries: Vec<Entry>,
}

struct Document {
    path: String,
    sections: Vec<Section>,
}

const KNOWN_SECTIONS: [&str; 4] = ["problem", "model", "solvers", "reference"];

impl Document {
    fn parse(text: &str, path: &str) -> Result<Self, ScenarioError> {
        let mut sections: Vec<Section> = Vec::new();
        let err = |line: usize, message: String| ScenarioError::Parse {
            path: path.to_string(),
            line,
            message,
        };
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| err(line_no, format!("unterminated section header `{line}`")))?
                    .trim()
                    .to_string();
                if !KNOWN_SECTIONS.contains(&name.as_str()) {
                    return Err(err(line_no, format!("unknown section `[{name}]`")));
                }
                if sections.iter().any(|s| s.name == name) {
                    return Err(err(line_no, format!("duplicate section `[{name}]`")));
                }
                sections.push(Section {
                    name,
                    path: path.to_string(),
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(line_no, format!("expected `key = value`, found `{line}`")))?;
            let key = key.trim().to_string();
            let value = unquote(value.trim());
            let section = sections
                .last_mut()
                .ok_or_else(|| err(line_no, format!("key `{key}` appears before any section")))?;
            if section.entries.iter().any(|e| e.key == key) {
                return Err(err(
                    line_no,
                    format!("duplicate key `{key}` in [{}]", section.name),
                ));
            }
            section.entries.push(Entry { key, value, line: line_no, consumed: false });
        }
        Ok(Self { path: path.to_string(), sections })
    }

    fn section(&mut self, name: &str) -> Result<&mut Section, ScenarioError> {
        let path = self.path.clone();
        self.sections.iter_mut().find(|s| s.name == name).ok_or_else(|| {
            ScenarioError::Validation {
                path,
                field: name.to_string(),
                message: format!("missing required section `[{name}]`"),
            }
        })
    }

    fn optional_section(&mut self, name: &str) -> Option<&mut Section> {
        self.sections.iter_mut().find(|s| s.name == name)
    }

    /// Every section must have been visited and every key consumed.
    fn finish(&self) -> Result<(), ScenarioError> {
        for section in &self.sections {
            for entry in &section.entries {
                if !entry.consumed {
                    return Err(ScenarioError::Parse {
                        path: self.path.clone(),
                        line: entry.line,
                        message: format!("unknown key `{}` in [{}]", entry.key, section.name),
                    });
                }
            }
        }
        Ok(())
    }
}

impl Section {
    fn take(&mut self, key: &str) -> Option<&Entry> {
        let entry = self.entries.iter_mut().find(|e| e.key == key)?;
        entry.consumed = true;
        Some(&*entry)
    }

    fn required_str(&mut self, key: &str) -> Result<String, ScenarioError> {
        let name = self.name.clone();
        let path = self.path.clone();
        self.take(key).map(|e| e.value.clone()).ok_or_else(|| ScenarioError::Validation {
            path,
            field: key.to_string(),
            message: format!("missing required key in [{name}]"),
        })
    }

    fn optional_str(&mut self, key: &str) -> Result<Option<String>, ScenarioError> {
        Ok(self.take(key).map(|e| e.value.clone()))
    }

    fn required_f64(&mut self, key: &str) -> Result<f64, ScenarioError> {
        let text = self.required_str(key)?;
        self.parse_f64(key, &text)
    }

    fn optional_f64(&mut self, key: &str) -> Result<Option<f64>, ScenarioError> {
        match self.optional_str(key)? {
            Some(text) => Ok(Some(self.parse_f64(key, &text)?)),
            None => Ok(None),
        }
    }

    fn parse_f64(&self, key: &str, text: &str) -> Result<f64, ScenarioError> {
        text.parse::<f64>().map_err(|_| ScenarioError::Validation {
            path: self.path.clone(),
            field: key.to_string(),
            message: format!("cannot parse `{text}` as a real number"),
        })
    }

    fn finish(&self) -> Result<(), ScenarioError> {
        for entry in &self.entries {
            if !entry.consumed {
                return Err(ScenarioError::Parse {
                    path: self.path.clone(),
                    line: entry.line,
                    message: format!("unknown key `{}` in [{}]", entry.key, self.name),
                });
            }
        }
        Ok(())
    }
}

fn unquote(value: &str) -> String {
    let v = value.trim();
    if v.len() >= 2 && v.starts_with('"') && v.ends_with('"') {
        v[1..v.len() - 1].to_string()
    } else {
        v.to_string()
    }
}
