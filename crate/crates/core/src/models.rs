//! The three case-study models: logistic population growth, building
//! temperature relaxation, and market price adjustment with a moving pole.
//!
//! Each model implements [`Rhs`] directly and carries its own initial
//! condition; logistic and temperature also provide closed-form solutions
//! used as oracles by the error-analysis tooling.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::problem::Rhs;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("model field `{field}` is invalid: {reason}")]
pub struct ModelError {
    pub field: &'static str,
    pub reason: &'static str,
}

fn require(ok: bool, field: &'static str, reason: &'static str) -> Result<(), ModelError> {
    if ok {
        Ok(())
    } else {
        Err(ModelError { field, reason })
    }
}

/// Logistic population growth `dP/dt = r·P·(1 − P/K)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticModel {
    /// Intrinsic growth rate r (1/time).
    pub growth_rate: f64,
    /// Carrying capacity K (population units).
    pub capacity: f64,
    /// Initial population P0.
    pub initial: f64,
}

impl LogisticModel {
    pub fn new(growth_rate: f64, capacity: f64, initial: f64) -> Result<Self, ModelError> {
        require(growth_rate > 0.0 && growth_rate.is_finite(), "growth_rate", "must be > 0")?;
        require(capacity > 0.0 && capacity.is_finite(), "capacity", "must be > 0")?;
        require(initial > 0.0 && initial.is_finite(), "initial", "must be > 0")?;
        Ok(Self { growth_rate, capacity, initial })
    }

    /// Closed-form solution `K / (1 + ((K − P0)/P0)·e^{−rt})`.
    pub fn exact(&self, t: f64) -> f64 {
        let ratio = (self.capacity - self.initial) / self.initial;
        self.capacity / (1.0 + ratio * (-self.growth_rate * t).exp())
    }
}

impl Rhs for LogisticModel {
    fn eval(&self, _t: f64, population: f64) -> f64 {
        self.growth_rate * population * (1.0 - population / self.capacity)
    }
}

/// Periodic ambient temperature `M(t) = mean + amplitude·sin(2πt/period)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbientProfile {
    pub mean: f64,
    pub amplitude: f64,
    pub period: f64,
}

impl AmbientProfile {
    pub fn value(&self, t: f64) -> f64 {
        self.mean + self.amplitude * (TAU * t / self.period).sin()
    }
}

/// Indoor temperature relaxing toward a periodic ambient:
/// `dT/dt = k·(M(t) − T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureModel {
    /// Thermal exchange coefficient k (1/time).
    pub exchange_rate: f64,
    /// Initial indoor temperature T0 (degrees).
    pub initial: f64,
    pub ambient: AmbientProfile,
}

impl TemperatureModel {
    pub fn new(exchange_rate: f64, initial: f64, ambient: AmbientProfile) -> Result<Self, ModelError> {
        require(exchange_rate > 0.0 && exchange_rate.is_finite(), "exchange_rate", "must be > 0")?;
        require(initial.is_finite(), "initial", "must be finite")?;
        require(ambient.mean.is_finite(), "ambient_mean", "must be finite")?;
        require(ambient.amplitude.is_finite(), "ambient_amplitude", "must be finite")?;
        require(ambient.period > 0.0 && ambient.period.is_finite(), "ambient_period", "must be > 0")?;
        Ok(Self { exchange_rate, initial, ambient })
    }

    /// Closed-form solution of the linear ODE:
    ///
    /// ```text
    /// T(t) = A + C₁·e^{−kt} + (kB/(k²+ω²))·(k·sin ωt − ω·cos ωt),   ω = 2π/period
    /// ```
    ///
    /// with C₁ fixed by T(0) = T0. Verified against a fine-step RK4 run in
    /// the tests below before being trusted as an oracle.
    pub fn exact(&self, t: f64) -> f64 {
        let k = self.exchange_rate;
        let omega = TAU / self.ambient.period;
        let forced = k * self.ambient.amplitude / (k * k + omega * omega);
        let c1 = self.initial - self.ambient.mean + forced * omega;
        self.ambient.mean
            + c1 * (-k * t).exp()
            + forced * (k * (omega * t).sin() - omega * (omega * t).cos())
    }
}

impl Rhs for TemperatureModel {
    fn eval(&self, t: f64, temperature: f64) -> f64 {
        self.exchange_rate * (self.ambient.value(t) - temperature)
    }
}

/// Linear demand `D(p) = intercept − slope·p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandCurve {
    pub intercept: f64,
    pub slope: f64,
}

/// Linear supply `S(p) = intercept + slope·p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupplyCurve {
    pub intercept: f64,
    pub slope: f64,
}

/// Denominator term `start − rate·t`, zero at `t = start/rate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovingPole {
    pub start: f64,
    pub rate: f64,
}

impl MovingPole {
    /// Time at which the denominator crosses zero, if `rate` is nonzero.
    pub fn time(&self) -> Option<f64> {
        if self.rate == 0.0 {
            None
        } else {
            Some(self.start / self.rate)
        }
    }
}

/// Market price adjustment `dp/dt = adjust·(D(p) − S(p)) / (start − rate·t)`.
///
/// The denominator passes through zero at `t = start/rate`, so evaluations
/// there are non-finite and the solvers' blow-up policy takes over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketModel {
    /// Price adjustment speed.
    pub adjust_speed: f64,
    pub demand: DemandCurve,
    pub supply: SupplyCurve,
    pub pole: MovingPole,
    /// Initial price p0.
    pub initial: f64,
}

impl MarketModel {
    pub fn new(
        adjust_speed: f64,
        demand: DemandCurve,
        supply: SupplyCurve,
        pole: MovingPole,
        initial: f64,
    ) -> Result<Self, ModelError> {
        require(adjust_speed > 0.0 && adjust_speed.is_finite(), "adjust_speed", "must be > 0")?;
        require(demand.slope > 0.0 && demand.slope.is_finite(), "demand_slope", "must be > 0")?;
        require(supply.slope > 0.0 && supply.slope.is_finite(), "supply_slope", "must be > 0")?;
        require(demand.intercept.is_finite(), "demand_intercept", "must be finite")?;
        require(supply.intercept.is_finite(), "supply_intercept", "must be finite")?;
        require(pole.start.is_finite(), "pole_start", "must be finite")?;
        require(pole.rate.is_finite(), "pole_rate", "must be finite")?;
        require(initial.is_finite(), "initial", "must be finite")?;
        Ok(Self { adjust_speed, demand, supply, pole, initial })
    }

    /// Price at which demand equals supply.
    pub fn equilibrium_price(&self) -> f64 {
        (self.demand.intercept - self.supply.intercept) / (self.demand.slope + self.supply.slope)
    }
}

impl Rhs for MarketModel {
    fn eval(&self, t: f64, price: f64) -> f64 {
        let demand = self.demand.intercept - self.demand.slope * price;
        let supply = self.supply.intercept + self.supply.slope * price;
        self.adjust_speed * (demand - supply) / (self.pole.start - self.pole.rate * t)
    }
}

/// Any of the three case-study models, with uniform access to the pieces
/// the harness needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CaseModel {
    Logistic(LogisticModel),
    Temperature(TemperatureModel),
    Market(MarketModel),
}

impl CaseModel {
    pub fn kind_name(&self) -> &'static str {
        match self {
            CaseModel::Logistic(_) => "logistic",
            CaseModel::Temperature(_) => "temperature",
            CaseModel::Market(_) => "market",
        }
    }

    /// Initial condition y(x0) for the model's dependent variable.
    pub fn initial_value(&self) -> f64 {
        match self {
            CaseModel::Logistic(m) => m.initial,
            CaseModel::Temperature(m) => m.initial,
            CaseModel::Market(m) => m.initial,
        }
    }

    /// Closed-form solution, where one exists (not for the market model).
    pub fn exact(&self, t: f64) -> Option<f64> {
        match self {
            CaseModel::Logistic(m) => Some(m.exact(t)),
            CaseModel::Temperature(m) => Some(m.exact(t)),
            CaseModel::Market(_) => None,
        }
    }

    /// Axis label for the dependent variable.
    pub fn variable_name(&self) -> &'static str {
        match self {
            CaseModel::Logistic(_) => "population",
            CaseModel::Temperature(_) => "temperature",
            CaseModel::Market(_) => "price",
        }
    }
}

impl Rhs for CaseModel {
    fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            CaseModel::Logistic(m) => m.eval(x, y),
            CaseModel::Temperature(m) => m.eval(x, y),
            CaseModel::Market(m) => m.eval(x, y),
        }
    }
}

/// Default parameters for the shipped demonstration scenarios. These are
/// repository choices that produce the documented qualitative behavior, not
/// values taken from any dataset.
pub mod defaults {
    use super::*;

    pub fn logistic() -> LogisticModel {
        LogisticModel::new(0.1, 1000.0, 100.0).expect("valid defaults")
    }

    pub fn temperature() -> TemperatureModel {
        TemperatureModel::new(
            0.5,
            30.0,
            AmbientProfile { mean: 20.0, amplitude: 5.0, period: 24.0 },
        )
        .expect("valid defaults")
    }

    /// Cooling variant (zero ambient amplitude), whose solution is plain
    /// exponential decay toward the mean.
    pub fn cooling() -> TemperatureModel {
        TemperatureModel::new(
            0.5,
            30.0,
            AmbientProfile { mean: 20.0, amplitude: 0.0, period: 24.0 },
        )
        .expect("valid defaults")
    }

    /// Market parameters whose exact solution diverges at t = 10: the
    /// deviation from equilibrium obeys u ∝ (10 − t)^{-2}, so every solver
    /// fails in finite time once the pole sits inside the interval.
    pub fn market() -> MarketModel {
        MarketModel::new(
            1.0,
            DemandCurve { intercept: 10.0, slope: 1.0 },
            SupplyCurve { intercept: 2.0, slope: 1.0 },
            MovingPole { start: -10.0, rate: -1.0 },
            3.0,
        )
        .expect("valid defaults")
    }
}
