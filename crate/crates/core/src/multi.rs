//! Multi-objective Jaya with an external Pareto archive.
//!
//! All comparisons use the fitness vector: each objective in minimize form
//! plus `penalty_weight * violation`. Per iteration the best guide is a
//! uniformly drawn non-dominated member and the worst guide is drawn from the
//! members dominated by the most others. A proposal replaces its parent when
//! it dominates it, or when neither dominates and the proposal violates the
//! constraints strictly less.

use serde::Serialize;

use crate::bounds::Bounds;
use crate::config::SolverConfig;
use crate::constraints::ConstraintSet;
use crate::error::{JayaError, Result};
use crate::eval::{evaluate_point, Evaluator, Objective};

type ObjectiveRef = dyn Fn(&[f64]) -> f64 + Send + Sync;
use crate::population::{initialize_population, jaya_update, Evaluation, Population, Sense};
use crate::rng::{RngStream, UniformSource};
use crate::single::{early_stop_check, resize_population};

/// Pareto dominance in minimize form: `a` is no worse everywhere and strictly
/// better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(JayaError::Dimension {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(dominates_unchecked(a, b))
}

#[inline]
pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Indices (ascending) of the non-dominated points. Duplicated
/// non-dominated vectors are all kept.
///
/// Points are scanned in lexicographic order; a dominator always sorts
/// strictly before what it dominates, so each point only has to be checked
/// against the survivors found so far.
pub fn pareto_filter(points: &[Vec<f64>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .iter()
            .zip(&points[b])
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        if !kept.iter().any(|&k| dominates_unchecked(&points[k], &points[i])) {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept
}

/// Number of members dominating each member.
fn domination_counts(fitness: &[&[f64]]) -> Vec<usize> {
    let n = fitness.len();
    let mut counts = vec![0; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && dominates_unchecked(fitness[j], fitness[i]) {
                counts[i] += 1;
            }
        }
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontEntry {
    pub x: Vec<f64>,
    /// Raw objective values in the caller's own sense.
    pub objectives: Vec<f64>,
    #[serde(skip)]
    pub fitness: Vec<f64>,
    #[serde(skip)]
    pub violation: f64,
}

/// Archive of mutually non-dominated points.
///
/// Infeasible points are admitted only until the first feasible one shows up;
/// at that moment every infeasible entry is purged.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParetoFront {
    pub entries: Vec<FrontEntry>,
    pub capacity: Option<usize>,
    feasible_found: bool,
}

impl ParetoFront {
    pub fn new(capacity: Option<usize>) -> Self {
        Self {
            entries: Vec::new(),
            capacity,
            feasible_found: false,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether any feasible point has been offered to the archive.
    pub fn feasible_found(&self) -> bool {
        self.feasible_found
    }

    pub fn insert(&mut self, entry: FrontEntry) {
        let feasible = entry.violation == 0.0;
        if feasible && !self.feasible_found {
            self.feasible_found = true;
            self.entries.clear();
        }
        if !feasible && self.feasible_found {
            return;
        }
        if self
            .entries
            .iter()
            .any(|e| e.x == entry.x || dominates_unchecked(&e.fitness, &entry.fitness))
        {
            return;
        }
        self.entries
            .retain(|e| !dominates_unchecked(&entry.fitness, &e.fitness));
        self.entries.push(entry);
        if let Some(cap) = self.capacity {
            while self.entries.len() > cap {
                self.evict_most_crowded();
            }
        }
    }

    /// Drops the entry closest to its nearest neighbour in objective space,
    /// which keeps the widest spread.
    fn evict_most_crowded(&mut self) {
        let n = self.entries.len();
        if n < 2 {
            self.entries.clear();
            return;
        }
        let mut victim = 0;
        let mut victim_gap = f64::INFINITY;
        for i in 0..n {
            let gap = (0..n)
                .filter(|&j| j != i)
                .map(|j| squared_distance(&self.entries[i].fitness, &self.entries[j].fitness))
                .fold(f64::INFINITY, f64::min);
            if gap < victim_gap {
                victim_gap = gap;
                victim = i;
            }
        }
        self.entries.remove(victim);
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub x: Vec<f64>,
    pub objectives: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiIterationRecord {
    pub iteration: usize,
    pub front_size: usize,
    pub pop_size: usize,
    /// Per-objective minima (minimize form, penalized) of every point
    /// evaluated so far.
    pub ideal_point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiRunResult {
    pub front: ParetoFront,
    pub final_population: Vec<Solution>,
    pub iterations_run: usize,
    pub history: Vec<MultiIterationRecord>,
    pub evaluations: usize,
    pub stopped_early: bool,
    pub senses: Vec<Sense>,
    pub initial_pop_size: usize,
    pub seed: u64,
    pub bounds: Bounds,
    pub max_iter: usize,
}

impl MultiRunResult {
    pub fn ideal_point(&self) -> Option<&[f64]> {
        self.history.last().map(|h| h.ideal_point.as_slice())
    }

    /// Best raw value of each objective over the front, in the caller's sense.
    pub fn front_extremes(&self) -> Vec<f64> {
        (0..self.senses.len())
            .map(|k| {
                let vals = self.front.entries.iter().map(|e| e.objectives[k]);
                match self.senses[k] {
                    Sense::Minimize => vals.fold(f64::INFINITY, f64::min),
                    Sense::Maximize => vals.fold(f64::NEG_INFINITY, f64::max),
                }
            })
            .collect()
    }
}

/// Draws the best and worst guide for one iteration.
pub fn select_guides<R: UniformSource + ?Sized>(pop: &Population, rng: &mut R) -> Result<(usize, usize)> {
    for (i, c) in pop.members.iter().enumerate() {
        if !c.is_evaluated() {
            return Err(JayaError::EvaluationOrder(i));
        }
    }
    let fitness: Vec<&[f64]> = pop.members.iter().map(|c| c.fitness.as_slice()).collect();
    let counts = domination_counts(&fitness);
    let rank0: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] == 0).collect();
    let max_count = counts.iter().copied().max().unwrap_or(0);
    let most_dominated: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] == max_count).collect();
    let best = rank0[rng.next_index(rank0.len())];
    let worst = most_dominated[rng.next_index(most_dominated.len())];
    Ok((best, worst))
}

/// Most expendable first: most dominated, then most infeasible, then latest.
fn expendable_first(pop: &Population) -> Vec<usize> {
    let fitness: Vec<&[f64]> = pop.members.iter().map(|c| c.fitness.as_slice()).collect();
    let counts = domination_counts(&fitness);
    let mut order: Vec<usize> = (0..pop.len()).collect();
    order.sort_by(|&a, &b| {
        counts[b]
            .cmp(&counts[a])
            .then(pop.members[b].violation.total_cmp(&pop.members[a].violation))
            .then(b.cmp(&a))
    });
    order
}

fn accepts(child: &Evaluation, parent_fitness: &[f64], parent_violation: f64) -> bool {
    if dominates_unchecked(&child.fitness, parent_fitness) {
        return true;
    }
    !dominates_unchecked(parent_fitness, &child.fitness) && child.violation < parent_violation
}

/// Multi-objective Jaya. `cfg.sense` is ignored; each objective carries its
/// own direction.
pub fn jaya_multi(
    objectives: &[Objective],
    bounds: &Bounds,
    cs: &ConstraintSet,
    cfg: &SolverConfig,
) -> Result<MultiRunResult> {
    jaya_multi_with_archive(objectives, bounds, cs, cfg, None)
}

/// As [`jaya_multi`] with a bounded archive.
pub fn jaya_multi_with_archive(
    objectives: &[Objective],
    bounds: &Bounds,
    cs: &ConstraintSet,
    cfg: &SolverConfig,
    capacity: Option<usize>,
) -> Result<MultiRunResult> {
    if objectives.len() < 2 {
        return Err(JayaError::UseJayaInstead(objectives.len()));
    }
    if capacity == Some(0) {
        return Err(JayaError::InvalidConfig("archive capacity must be positive".into()));
    }
    cfg.validate()?;
    let seed = cfg.resolve_seed();
    let mut rng = RngStream::new(seed);
    let evaluator = Evaluator::new(cfg.workers)?;
    let fns: Vec<(&ObjectiveRef, Sense)> = objectives.iter().map(|o| (o.f.as_ref(), o.sense)).collect();
    let eval = |x: &Vec<f64>| evaluate_point(x, &fns, cs);
    let n_obj = objectives.len();

    let mut archive = ParetoFront::new(capacity);
    let mut ideal = vec![f64::INFINITY; n_obj];
    let mut evaluations = 0;

    let mut pop = initialize_population(bounds, cfg.pop_size, &mut rng)?;
    evaluate_pending(&mut pop, &evaluator, &eval, &mut evaluations, &mut archive, &mut ideal)?;

    let mut history: Vec<MultiIterationRecord> = Vec::with_capacity(cfg.max_iter);
    let mut stopped_early = false;

    for t in 1..=cfg.max_iter {
        let (best, worst) = select_guides(&pop, &mut rng)?;
        let x_best = pop.members[best].x.clone();
        let x_worst = pop.members[worst].x.clone();
        let proposals = pop
            .members
            .iter()
            .map(|c| jaya_update(&c.x, &x_best, &x_worst, bounds, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        let results = evaluator.map(&proposals, eval)?;
        evaluations += proposals.len();

        for ((member, x), e) in pop.members.iter_mut().zip(proposals).zip(results) {
            record(&mut archive, &mut ideal, &x, &e);
            if accepts(&e, &member.fitness, member.violation) {
                member.x = x;
                member.set_multi(e);
            }
        }
        pop.generation = t;
        history.push(MultiIterationRecord {
            iteration: t,
            front_size: archive.len(),
            pop_size: pop.len(),
            ideal_point: ideal.clone(),
        });

        if let Some(es) = cfg.early_stop {
            let stalled = (0..n_obj).all(|k| {
                let series: Vec<f64> = history.iter().map(|h| h.ideal_point[k]).collect();
                early_stop_check(&series, es.tolerance, es.patience)
            });
            if stalled {
                stopped_early = true;
                break;
            }
        }
        if cfg.adaptive_pop && t < cfg.max_iter {
            if let Some(improved) = ideal_improved(&history, cfg.stall_window(), cfg.stall_tolerance()) {
                pop = resize_population(
                    pop,
                    improved,
                    cfg.min_pop(),
                    cfg.max_pop(),
                    bounds,
                    &mut rng,
                    expendable_first,
                );
                evaluate_pending(&mut pop, &evaluator, &eval, &mut evaluations, &mut archive, &mut ideal)?;
            }
        }
    }

    let final_population = pop
        .members
        .iter()
        .map(|c| Solution {
            x: c.x.clone(),
            objectives: c.raw_objectives.clone(),
        })
        .collect();
    Ok(MultiRunResult {
        front: archive,
        final_population,
        iterations_run: history.len(),
        history,
        evaluations,
        stopped_early,
        senses: objectives.iter().map(|o| o.sense).collect(),
        initial_pop_size: cfg.pop_size,
        seed,
        bounds: bounds.clone(),
        max_iter: cfg.max_iter,
    })
}

fn ideal_improved(history: &[MultiIterationRecord], window: usize, tolerance: f64) -> Option<bool> {
    let n = history.len();
    if window == 0 || n < window + 1 {
        return None;
    }
    let then = &history[n - 1 - window].ideal_point;
    let now = &history[n - 1].ideal_point;
    Some(then.iter().zip(now).any(|(a, b)| {
        let gain = a - b;
        gain > 0.0 && gain >= tolerance
    }))
}

fn record(archive: &mut ParetoFront, ideal: &mut [f64], x: &[f64], e: &Evaluation) {
    for (m, f) in ideal.iter_mut().zip(&e.fitness) {
        if *f < *m {
            *m = *f;
        }
    }
    archive.insert(FrontEntry {
        x: x.to_vec(),
        objectives: e.raw.clone(),
        fitness: e.fitness.clone(),
        violation: e.violation,
    });
}

fn evaluate_pending<E>(
    pop: &mut Population,
    evaluator: &Evaluator,
    eval: &E,
    counter: &mut usize,
    archive: &mut ParetoFront,
    ideal: &mut [f64],
) -> Result<()>
where
    E: Fn(&Vec<f64>) -> Result<Evaluation> + Sync + Send,
{
    let pending: Vec<usize> = (0..pop.len()).filter(|&i| !pop.members[i].is_evaluated()).collect();
    if pending.is_empty() {
        return Ok(());
    }
    let xs: Vec<Vec<f64>> = pending.iter().map(|&i| pop.members[i].x.clone()).collect();
    let results = evaluator.map(&xs, eval)?;
    *counter += xs.len();
    for (i, e) in pending.into_iter().zip(results) {
        record(archive, ideal, &pop.members[i].x, &e);
        pop.members[i].set_multi(e);
    }
    Ok(())
}
