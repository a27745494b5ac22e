use serde::{Deserialize, Serialize};

use crate::error::{JayaError, Result};
use crate::population::Sense;

pub const DEFAULT_POP_SIZE: usize = 50;

/// Stall window used by the adaptive population rule when no early stop is
/// configured.
pub const DEFAULT_STALL_WINDOW: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EarlyStop {
    pub tolerance: f64,
    pub patience: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub pop_size: usize,
    pub max_iter: usize,
    pub sense: Sense,
    pub seed: Option<u64>,
    pub adaptive_pop: bool,
    /// Defaults to `max(2, pop_size / 2)` when adaptive.
    pub min_pop: Option<usize>,
    /// Defaults to `2 * pop_size` when adaptive.
    pub max_pop: Option<usize>,
    pub early_stop: Option<EarlyStop>,
    /// Evaluation workers; `None` uses every available core.
    pub workers: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            pop_size: DEFAULT_POP_SIZE,
            max_iter: 100,
            sense: Sense::Minimize,
            seed: None,
            adaptive_pop: false,
            min_pop: None,
            max_pop: None,
            early_stop: None,
            workers: None,
        }
    }
}

impl SolverConfig {
    pub fn new(pop_size: usize, max_iter: usize) -> Self {
        Self {
            pop_size,
            max_iter,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_sense(mut self, sense: Sense) -> Self {
        self.sense = sense;
        self
    }

    pub fn with_early_stop(mut self, tolerance: f64, patience: usize) -> Self {
        self.early_stop = Some(EarlyStop { tolerance, patience });
        self
    }

    pub fn with_adaptive(mut self, min_pop: usize, max_pop: usize) -> Self {
        self.adaptive_pop = true;
        self.min_pop = Some(min_pop);
        self.max_pop = Some(max_pop);
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    pub fn min_pop(&self) -> usize {
        self.min_pop.unwrap_or((self.pop_size / 2).max(2))
    }

    pub fn max_pop(&self) -> usize {
        self.max_pop.unwrap_or(self.pop_size * 2)
    }

    /// Iterations inspected when deciding whether the search has stalled.
    pub fn stall_window(&self) -> usize {
        match self.early_stop {
            Some(es) => es.patience.div_ceil(2),
            None => DEFAULT_STALL_WINDOW,
        }
    }

    /// Minimum improvement that counts as progress; zero means any strict
    /// improvement.
    pub fn stall_tolerance(&self) -> f64 {
        self.early_stop.map_or(0.0, |es| es.tolerance)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(JayaError::InvalidConfig(msg));
        if self.pop_size < 2 {
            return bad(format!("population size must be at least 2, got {}", self.pop_size));
        }
        if self.max_iter < 1 {
            return bad("maximum iterations must be at least 1".into());
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        if let Some(es) = self.early_stop {
            if es.patience < 1 {
                return bad("patience must be at least 1".into());
            }
            if !(es.tolerance.is_finite() && es.tolerance > 0.0) {
                return bad(format!("tolerance must be positive, got {}", es.tolerance));
            }
        }
        if self.adaptive_pop {
            let (lo, hi) = (self.min_pop(), self.max_pop());
            if lo < 2 {
                return bad(format!("min_pop must be at least 2, got {lo}"));
            }
            if !(lo <= self.pop_size && self.pop_size <= hi) {
                return bad(format!(
                    "adaptive range requires min_pop <= pop_size <= max_pop, got {lo} <= {} <= {hi}",
                    self.pop_size
                ));
            }
        }
        Ok(())
    }

    pub(crate) fn resolve_seed(&self) -> u64 {
        use rand_core::{OsRng, TryRngCore};
        self.seed
            .unwrap_or_else(|| OsRng.try_next_u64().unwrap_or(0x5eed_0000_0000_0001))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_pop_size_is_fifty() {
        assert_eq!(SolverConfig::default().pop_size, 50);
    }

    #[test]
    fn validation() {
        assert!(SolverConfig::new(20, 50).validate().is_ok());
        assert!(SolverConfig::new(1, 50).validate().is_err());
        assert!(SolverConfig::new(20, 0).validate().is_err());
        assert!(SolverConfig::new(20, 5).with_early_stop(1e-3, 0).validate().is_err());
        assert!(SolverConfig::new(20, 5).with_early_stop(0.0, 3).validate().is_err());
        assert!(SolverConfig::new(20, 5).with_adaptive(1, 40).validate().is_err());
        assert!(SolverConfig::new(20, 5).with_adaptive(30, 40).validate().is_err());
        assert!(SolverConfig::new(20, 5).with_adaptive(10, 40).validate().is_ok());
        assert!(SolverConfig::new(20, 5).with_workers(0).validate().is_err());
    }

    #[test]
    fn adaptive_defaults_and_window() {
        let mut cfg = SolverConfig::new(100, 10);
        cfg.adaptive_pop = true;
        assert_eq!((cfg.min_pop(), cfg.max_pop()), (50, 200));
        assert_eq!(cfg.stall_window(), 5);
        assert_eq!(cfg.clone().with_early_stop(1e-3, 5).stall_window(), 3);
        assert_eq!(cfg.with_early_stop(1e-3, 4).stall_window(), 2);
    }
}
