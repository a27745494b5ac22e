//! Candidates, populations and the Jaya move.

use crate::bounds::Bounds;
use crate::error::{JayaError, Result};
use crate::rng::UniformSource;
use serde::{Deserialize, Serialize};

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    #[default]
    Minimize,
    Maximize,
}

impl Sense {
    /// Maps a raw objective value to minimize form.
    #[inline]
    pub fn to_min_form(self, v: f64) -> f64 {
        match self {
            Sense::Minimize => v,
            Sense::Maximize => -v,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sense::Minimize => "minimize",
            Sense::Maximize => "maximize",
        }
    }
}

/// Objective values of one evaluated point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// Raw objective values as returned by the user functions.
    pub raw: Vec<f64>,
    /// Minimize-form objectives with the constraint penalty added.
    pub fitness: Vec<f64>,
    /// Total squared constraint violation.
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub x: Vec<f64>,
    pub raw_objectives: Vec<f64>,
    pub fitness: Vec<f64>,
    /// Scalar used for comparisons. In single-objective mode this is the
    /// penalized minimize-form objective; in multi-objective mode it holds the
    /// constraint violation. `None` until evaluated.
    pub penalized: Option<f64>,
    pub violation: f64,
}

impl Candidate {
    pub fn new(x: Vec<f64>) -> Self {
        Self {
            x,
            raw_objectives: Vec::new(),
            fitness: Vec::new(),
            penalized: None,
            violation: 0.0,
        }
    }

    pub fn is_evaluated(&self) -> bool {
        self.penalized.is_some()
    }

    pub(crate) fn set_single(&mut self, eval: Evaluation) {
        self.penalized = Some(eval.fitness[0]);
        self.apply(eval);
    }

    pub(crate) fn set_multi(&mut self, eval: Evaluation) {
        self.penalized = Some(eval.violation);
        self.apply(eval);
    }

    fn apply(&mut self, eval: Evaluation) {
        self.raw_objectives = eval.raw;
        self.fitness = eval.fitness;
        self.violation = eval.violation;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub members: Vec<Candidate>,
    pub generation: usize,
}

impl Population {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Penalized values of every member; errors on the first unevaluated one.
    pub fn penalized_values(&self) -> Result<Vec<f64>> {
        self.members
            .iter()
            .enumerate()
            .map(|(i, c)| c.penalized.ok_or(JayaError::EvaluationOrder(i)))
            .collect()
    }
}

/// Draws one point uniformly inside `bounds`, variable by variable.
pub fn sample_uniform<R: UniformSource + ?Sized>(bounds: &Bounds, rng: &mut R) -> Vec<f64> {
    bounds
        .lower()
        .iter()
        .zip(bounds.upper())
        .map(|(lo, hi)| lo + rng.next_uniform() * (hi - lo))
        .collect()
}

/// Fills `pop_size` unevaluated candidates, member-major and variable-minor.
pub fn initialize_population<R: UniformSource + ?Sized>(
    bounds: &Bounds,
    pop_size: usize,
    rng: &mut R,
) -> Result<Population> {
    if pop_size < 2 {
        return Err(JayaError::InvalidConfig(format!(
            "population size must be at least 2, got {pop_size}"
        )));
    }
    // Revalidate in case the caller built the box by hand.
    let bounds = Bounds::new(bounds.lower().to_vec(), bounds.upper().to_vec())?;
    let members = (0..pop_size)
        .map(|_| Candidate::new(sample_uniform(&bounds, rng)))
        .collect();
    Ok(Population { members, generation: 0 })
}

/// One Jaya move:
/// `x_new = x_old + r1 (x_best - |x_old|) - r2 (x_worst - |x_old|)`,
/// with a fresh `(r1, r2)` pair drawn for each coordinate in index order,
/// followed by projection onto the box.
pub fn jaya_update<R: UniformSource + ?Sized>(
    x_old: &[f64],
    x_best: &[f64],
    x_worst: &[f64],
    bounds: &Bounds,
    rng: &mut R,
) -> Result<Vec<f64>> {
    bounds.check_dim(x_old)?;
    bounds.check_dim(x_best)?;
    bounds.check_dim(x_worst)?;
    let mut out = Vec::with_capacity(x_old.len());
    for i in 0..x_old.len() {
        let r1 = rng.next_uniform();
        let r2 = rng.next_uniform();
        let old = x_old[i];
        let abs_old = old.abs();
        let v = old + r1 * (x_best[i] - abs_old) - r2 * (x_worst[i] - abs_old);
        out.push(v.clamp(bounds.lower()[i], bounds.upper()[i]));
    }
    Ok(out)
}

/// Index of the best and worst member by penalized value. Ties go to the
/// lowest index in both directions.
pub fn select_best_worst(pop: &Population, sense: Sense) -> Result<(usize, usize)> {
    let values = pop.penalized_values()?;
    if values.is_empty() {
        return Err(JayaError::InvalidConfig("empty population".into()));
    }
    let mut best = 0;
    let mut worst = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        let v = sense.to_min_form(*v);
        if v < sense.to_min_form(values[best]) {
            best = i;
        }
        if v > sense.to_min_form(values[worst]) {
            worst = i;
        }
    }
    Ok((best, worst))
}
