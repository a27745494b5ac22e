//! Static quadratic exterior penalty.
//!
//! A constraint `g` is satisfied when `g(x) <= 0`. The violation of `x` is
//! `sum_j max(0, g_j(x))^2` and the penalized fitness adds
//! `penalty_weight * violation` to the minimize-form objective.

use std::fmt;
use std::sync::Arc;

use crate::error::{JayaError, Result};

pub type ConstraintFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

pub const DEFAULT_PENALTY_WEIGHT: f64 = 1e6;

#[derive(Clone)]
pub struct ConstraintSet {
    constraints: Vec<ConstraintFn>,
    penalty_weight: f64,
}

impl fmt::Debug for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConstraintSet")
            .field("constraints", &self.constraints.len())
            .field("penalty_weight", &self.penalty_weight)
            .finish()
    }
}

impl Default for ConstraintSet {
    fn default() -> Self {
        Self::new()
    }
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self {
            constraints: Vec::new(),
            penalty_weight: DEFAULT_PENALTY_WEIGHT,
        }
    }

    pub fn with_penalty_weight(mut self, weight: f64) -> Result<Self> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(JayaError::InvalidConfig(format!(
                "penalty weight must be positive, got {weight}"
            )));
        }
        self.penalty_weight = weight;
        Ok(self)
    }

    /// Adds `g`, feasible where `g(x) <= 0`.
    pub fn push<F>(mut self, g: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.constraints.push(Arc::new(g));
        self
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn penalty_weight(&self) -> f64 {
        self.penalty_weight
    }
}

/// Total squared violation; exactly zero on the feasible set.
pub fn violation(x: &[f64], cs: &ConstraintSet) -> Result<f64> {
    let mut total = 0.0;
    for (index, g) in cs.constraints.iter().enumerate() {
        let value = g(x);
        if !value.is_finite() {
            return Err(JayaError::NonFiniteConstraint {
                index,
                value,
                x: x.to_vec(),
            });
        }
        if value > 0.0 {
            total += value * value;
        }
    }
    Ok(total)
}

/// `raw + penalty_weight * violation(x)`. `raw` must already be in minimize
/// form so the penalty always makes things worse.
pub fn penalize(raw: f64, x: &[f64], cs: &ConstraintSet) -> Result<f64> {
    Ok(raw + cs.penalty_weight * violation(x, cs)?)
}
