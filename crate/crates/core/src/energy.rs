//! Renewable energy-mix case study.
//!
//! Four decision variables give the percentage share of wind, solar, hydro
//! and storage. Three objectives are traded off: emissions (minimize), cost
//! (minimize) and a reliability index (maximize). The models are simple
//! linear stand-ins with overridable factors; they illustrate the solver,
//! they are not an energy-system model.
//!
//! Shipped defaults (per percentage point of share, order wind, solar,
//! hydro, storage):
//!
//! | factor              | wind | solar | hydro | storage |
//! |---------------------|------|-------|-------|---------|
//! | emissions           | 1.1  | 2.0   | 2.4   | 3.0     |
//! | capital cost        | 0.9  | 0.7   | 1.9   | 1.5     |
//! | operational cost    | 0.3  | 0.3   | 0.6   | 0.5     |
//! | reliability weight  | 0.2  | 0.2   | 1.0   | 0.8     |
//!
//! and an intermittency penalty of 0.5 per point of wind + solar. Wind and
//! solar are the low-emission sources, hydro the most expensive, and hydro
//! plus storage carry reliability. Reliability is positive for
//! hydro/storage-heavy mixes and negative for wind/solar-heavy ones.

use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::config::{EarlyStop, SolverConfig};
use crate::constraints::ConstraintSet;
use crate::error::{JayaError, Result};
use crate::eval::Objective;
use crate::multi::{jaya_multi, MultiRunResult};

pub const SOURCES: [&str; 4] = ["wind", "solar", "hydro", "storage"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyMix {
    pub wind: f64,
    pub solar: f64,
    pub hydro: f64,
    pub storage: f64,
}

impl EnergyMix {
    pub fn new(wind: f64, solar: f64, hydro: f64, storage: f64) -> Self {
        Self {
            wind,
            solar,
            hydro,
            storage,
        }
    }

    pub fn from_slice(x: &[f64]) -> Self {
        Self::new(x[0], x[1], x[2], x[3])
    }

    pub fn shares(&self) -> [f64; 4] {
        [self.wind, self.solar, self.hydro, self.storage]
    }

    pub fn total(&self) -> f64 {
        self.wind + self.solar + self.hydro + self.storage
    }
}

/// Per-source coefficients, ordered wind, solar, hydro, storage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergyModel {
    pub emission_factors: [f64; 4],
    pub capital_cost: [f64; 4],
    pub operational_cost: [f64; 4],
    pub reliability_weights: [f64; 4],
    pub intermittency_penalty: f64,
}

impl Default for EnergyModel {
    fn default() -> Self {
        Self {
            emission_factors: [1.1, 2.0, 2.4, 3.0],
            capital_cost: [0.9, 0.7, 1.9, 1.5],
            operational_cost: [0.3, 0.3, 0.6, 0.5],
            reliability_weights: [0.2, 0.2, 1.0, 0.8],
            intermittency_penalty: 0.5,
        }
    }
}

impl EnergyModel {
    pub fn cost_factors(&self) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (o, (c, op)) in out.iter_mut().zip(self.capital_cost.iter().zip(&self.operational_cost)) {
            *o = c + op;
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let all = self
            .emission_factors
            .iter()
            .chain(&self.capital_cost)
            .chain(&self.operational_cost)
            .chain(&self.reliability_weights)
            .chain(std::iter::once(&self.intermittency_penalty));
        for v in all {
            if !v.is_finite() {
                return Err(JayaError::InvalidConfig("energy model factors must be finite".into()));
            }
        }
        Ok(())
    }
}

fn dot(mix: &EnergyMix, factors: &[f64; 4]) -> f64 {
    mix.shares().iter().zip(factors).map(|(s, f)| s * f).sum()
}

pub fn emissions_model(mix: &EnergyMix, factors: &[f64; 4]) -> f64 {
    dot(mix, factors)
}

/// `factors` are combined capital + operational cost per source.
pub fn cost_model(mix: &EnergyMix, factors: &[f64; 4]) -> f64 {
    dot(mix, factors)
}

pub fn reliability_model(mix: &EnergyMix, weights: &[f64; 4], intermittency_penalty: f64) -> f64 {
    dot(mix, weights) - intermittency_penalty * (mix.wind + mix.solar)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergyCaseConfig {
    pub model: EnergyModel,
    pub share_lower: f64,
    pub share_upper: f64,
    /// Minimum combined share; feasible mixes satisfy `total >= min_total`.
    pub min_total: f64,
    pub pop_size: usize,
    pub max_iter: usize,
    pub adaptive_pop: bool,
    pub min_pop: usize,
    pub max_pop: usize,
    pub tolerance: f64,
    pub patience: usize,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
}

impl Default for EnergyCaseConfig {
    fn default() -> Self {
        Self {
            model: EnergyModel::default(),
            share_lower: 10.0,
            share_upper: 40.0,
            min_total: 70.0,
            pop_size: 100,
            max_iter: 100,
            adaptive_pop: true,
            min_pop: 50,
            max_pop: 200,
            tolerance: 1e-3,
            patience: 10,
            seed: Some(2024),
            workers: None,
        }
    }
}

impl EnergyCaseConfig {
    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            pop_size: self.pop_size,
            max_iter: self.max_iter,
            seed: self.seed,
            adaptive_pop: self.adaptive_pop,
            min_pop: Some(self.min_pop),
            max_pop: Some(self.max_pop),
            early_stop: Some(EarlyStop {
                tolerance: self.tolerance,
                patience: self.patience,
            }),
            workers: self.workers,
            ..SolverConfig::default()
        }
    }

    pub fn bounds(&self) -> Result<Bounds> {
        Bounds::uniform(4, self.share_lower, self.share_upper)
    }

    pub fn constraints(&self) -> ConstraintSet {
        let min_total = self.min_total;
        ConstraintSet::new().push(move |x| min_total - EnergyMix::from_slice(x).total())
    }

    pub fn objectives(&self) -> Vec<Objective> {
        let m = self.model;
        let cost = m.cost_factors();
        vec![
            Objective::minimize(move |x| emissions_model(&EnergyMix::from_slice(x), &m.emission_factors)),
            Objective::minimize(move |x| cost_model(&EnergyMix::from_slice(x), &cost)),
            Objective::maximize(move |x| {
                reliability_model(
                    &EnergyMix::from_slice(x),
                    &m.reliability_weights,
                    m.intermittency_penalty,
                )
            }),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyFrontRow {
    pub wind: f64,
    pub solar: f64,
    pub hydro: f64,
    pub storage: f64,
    pub total: f64,
    pub emissions: f64,
    pub cost: f64,
    pub reliability: f64,
}

#[derive(Debug, Clone)]
pub struct EnergyCaseResult {
    pub config: EnergyCaseConfig,
    pub run: MultiRunResult,
    pub rows: Vec<EnergyFrontRow>,
}

impl EnergyCaseResult {
    /// False when no mix satisfying the total-share constraint was found; the
    /// front then holds the least-violating mixes.
    pub fn feasible(&self) -> bool {
        self.run.front.feasible_found()
    }
}

pub fn run_energy_case(cfg: &EnergyCaseConfig) -> Result<EnergyCaseResult> {
    cfg.model.validate()?;
    let run = jaya_multi(
        &cfg.objectives(),
        &cfg.bounds()?,
        &cfg.constraints(),
        &cfg.solver_config(),
    )?;
    let rows = run
        .front
        .entries
        .iter()
        .map(|e| {
            let mix = EnergyMix::from_slice(&e.x);
            EnergyFrontRow {
                wind: mix.wind,
                solar: mix.solar,
                hydro: mix.hydro,
                storage: mix.storage,
                total: mix.total(),
                emissions: e.objectives[0],
                cost: e.objectives[1],
                reliability: e.objectives[2],
            }
        })
        .collect();
    Ok(EnergyCaseResult {
        config: cfg.clone(),
        run,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_factors_give_zero() {
        let mix = EnergyMix::new(12.0, 30.0, 25.0, 18.0);
        assert_eq!(emissions_model(&mix, &[0.0; 4]), 0.0);
        assert_eq!(cost_model(&mix, &[0.0; 4]), 0.0);
        assert_eq!(reliability_model(&mix, &[0.0; 4], 0.0), 0.0);
    }

    #[test]
    fn linear_in_factors() {
        let mix = EnergyMix::new(12.0, 30.0, 25.0, 18.0);
        let f = [1.3, 0.2, 2.0, 0.7];
        let f2 = f.map(|v| 2.0 * v);
        assert_eq!(emissions_model(&mix, &f2), 2.0 * emissions_model(&mix, &f));
        assert_eq!(cost_model(&mix, &f2), 2.0 * cost_model(&mix, &f));
    }

    #[test]
    fn hand_evaluated_dot_products() {
        assert_eq!(
            emissions_model(&EnergyMix::new(25.0, 25.0, 25.0, 25.0), &[1.0, 2.0, 3.0, 4.0]),
            250.0
        );
        // 40 + 30 + 20 + 40
        assert_eq!(
            cost_model(&EnergyMix::new(10.0, 10.0, 10.0, 40.0), &[4.0, 3.0, 2.0, 1.0]),
            130.0
        );
    }

    #[test]
    fn more_hydro_more_reliability() {
        let m = EnergyModel::default();
        let a = reliability_model(
            &EnergyMix::new(20.0, 20.0, 15.0, 20.0),
            &m.reliability_weights,
            m.intermittency_penalty,
        );
        let b = reliability_model(
            &EnergyMix::new(20.0, 20.0, 25.0, 20.0),
            &m.reliability_weights,
            m.intermittency_penalty,
        );
        assert!(b > a);
    }

    #[test]
    fn hydro_storage_heavy_mix_is_more_reliable() {
        // Defaults: (10,10,40,40) -> 2+2+40+32-10 = 66, (40,40,10,10) -> 8+8+10+8-40 = -6
        let m = EnergyModel::default();
        let heavy = reliability_model(
            &EnergyMix::new(10.0, 10.0, 40.0, 40.0),
            &m.reliability_weights,
            m.intermittency_penalty,
        );
        let light = reliability_model(
            &EnergyMix::new(40.0, 40.0, 10.0, 10.0),
            &m.reliability_weights,
            m.intermittency_penalty,
        );
        assert!((heavy - 66.0).abs() < 1e-9 && (light + 6.0).abs() < 1e-9);
        assert!(heavy > light);
    }

    #[test]
    fn cost_factors_sum_capital_and_operational() {
        assert_eq!(EnergyModel::default().cost_factors(), [1.2, 1.0, 2.5, 2.0]);
    }

    #[test]
    fn config_overrides_parse() {
        let cfg: EnergyCaseConfig = toml::from_str("min_total = 160\n[model]\nintermittency_penalty = 0.0\n").unwrap();
        assert_eq!(cfg.min_total, 160.0);
        assert_eq!(cfg.model.intermittency_penalty, 0.0);
        assert_eq!(cfg.model.emission_factors, EnergyModel::default().emission_factors);
        assert!(toml::from_str::<EnergyCaseConfig>("bogus = 1").is_err());
    }
}
