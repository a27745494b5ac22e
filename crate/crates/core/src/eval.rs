//! Objective evaluation, optionally fanned out to a worker pool.
//!
//! Results always come back in input order, and the first error reported is
//! the one with the lowest input index, so outcomes do not depend on the
//! number of workers.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::constraints::{violation, ConstraintSet};
use crate::error::{JayaError, Result};
use crate::population::{Evaluation, Sense};

pub type ObjectiveFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// One objective of a multi-objective problem with its direction.
#[derive(Clone)]
pub struct Objective {
    pub f: ObjectiveFn,
    pub sense: Sense,
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("sense", &self.sense)
            .finish_non_exhaustive()
    }
}

impl Objective {
    pub fn minimize<F>(f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            sense: Sense::Minimize,
        }
    }

    pub fn maximize<F>(f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            sense: Sense::Maximize,
        }
    }
}

/// Evaluates `x` against every objective and the constraint set. Each
/// objective is sense-normalized first, then `penalty_weight * violation`
/// is added to it.
pub fn evaluate_point<F>(x: &[f64], objectives: &[(F, Sense)], cs: &ConstraintSet) -> Result<Evaluation>
where
    F: Fn(&[f64]) -> f64,
{
    let mut raw = Vec::with_capacity(objectives.len());
    for (index, (f, _)) in objectives.iter().enumerate() {
        let value = f(x);
        if !value.is_finite() {
            return Err(JayaError::NonFiniteObjective {
                index,
                value,
                x: x.to_vec(),
            });
        }
        raw.push(value);
    }
    let violation = violation(x, cs)?;
    let penalty = cs.penalty_weight() * violation;
    let fitness = raw
        .iter()
        .zip(objectives)
        .map(|(v, (_, sense))| sense.to_min_form(*v) + penalty)
        .collect();
    Ok(Evaluation {
        raw,
        fitness,
        violation,
    })
}

/// Runs closures over a batch, serially or on a dedicated rayon pool.
pub struct Evaluator {
    pool: Option<rayon::ThreadPool>,
    workers: usize,
}

impl fmt::Debug for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Evaluator").field("workers", &self.workers).finish()
    }
}

impl Evaluator {
    /// `None` means one worker per available core.
    pub fn new(workers: Option<usize>) -> Result<Self> {
        let workers = match workers {
            Some(0) => return Err(JayaError::InvalidConfig("workers must be at least 1".into())),
            Some(n) => n,
            None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        };
        let pool = if workers > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .map_err(|e| JayaError::InvalidConfig(format!("cannot start worker pool: {e}")))?,
            )
        } else {
            None
        };
        Ok(Self { pool, workers })
    }

    pub fn serial() -> Self {
        Self { pool: None, workers: 1 }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Result<R> + Sync + Send,
    {
        let results: Vec<Result<R>> = match &self.pool {
            Some(pool) if items.len() > 1 => pool.install(|| items.par_iter().map(&f).collect()),
            _ => items.iter().map(&f).collect(),
        };
        results.into_iter().collect()
    }
}
