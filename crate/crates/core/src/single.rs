//! Single-objective Jaya solver.
//!
//! Each iteration picks the best and worst member once, proposes one move per
//! member (all random draws are made serially, member by member), evaluates
//! the proposals as a batch, and keeps a proposal only if its penalized value
//! is strictly lower than its parent's.

use serde::Serialize;

use crate::bounds::Bounds;
use crate::config::SolverConfig;
use crate::constraints::ConstraintSet;
use crate::error::Result;
use crate::eval::{evaluate_point, Evaluator};
use crate::population::{
    initialize_population, jaya_update, sample_uniform, select_best_worst, Candidate, Population, Sense,
};
use crate::rng::{RngStream, UniformSource};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub best_penalized: f64,
    pub pop_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub best_x: Vec<f64>,
    /// Raw (unpenalized, un-negated) objective at `best_x`.
    pub best_value: f64,
    /// Minimize-form penalized value at `best_x`.
    pub best_penalized: f64,
    pub history: Vec<IterationRecord>,
    pub iterations_run: usize,
    pub stopped_early: bool,
    pub evaluations: usize,
    pub adaptive_insertions: usize,
    pub initial_pop_size: usize,
    pub final_pop_size: usize,
    pub seed: u64,
    pub sense: Sense,
    pub bounds: Bounds,
    pub max_iter: usize,
}

impl RunResult {
    pub fn best_penalized_history(&self) -> Vec<f64> {
        self.history.iter().map(|r| r.best_penalized).collect()
    }

    pub fn is_feasible(&self) -> bool {
        self.best_penalized == self.sense.to_min_form(self.best_value)
    }
}

/// True once `history` holds at least `patience + 1` entries and the last
/// `patience` iterations improved the best value by less than `tolerance`.
pub fn early_stop_check(history: &[f64], tolerance: f64, patience: usize) -> bool {
    let n = history.len();
    if n < patience + 1 {
        return false;
    }
    history[n - 1 - patience] - history[n - 1] < tolerance
}

/// Whether the best value dropped by a meaningful amount over the last
/// `window` iterations. `None` while the history is too short to say.
pub fn improved_recently(history: &[f64], window: usize, tolerance: f64) -> Option<bool> {
    let n = history.len();
    if window == 0 || n < window + 1 {
        return None;
    }
    let gain = history[n - 1 - window] - history[n - 1];
    Some(gain > 0.0 && gain >= tolerance)
}

/// Grows the population by `ceil(10%)` fresh uniform members when the search
/// has stalled, or shrinks it by `ceil(10%)` when it is improving. Sizes are
/// kept within `[min_pop, max_pop]`. Fresh members are appended unevaluated.
///
/// `removal_order` lists member indices from most to least expendable;
/// shrinking drops a prefix of it.
pub(crate) fn resize_population<R: UniformSource + ?Sized>(
    mut pop: Population,
    improved: bool,
    min_pop: usize,
    max_pop: usize,
    bounds: &Bounds,
    rng: &mut R,
    removal_order: impl FnOnce(&Population) -> Vec<usize>,
) -> Population {
    let n = pop.len();
    let step = n.div_ceil(10);
    if improved {
        let drop = step.min(n.saturating_sub(min_pop));
        if drop > 0 {
            let order = removal_order(&pop);
            let mut remove = vec![false; n];
            for &i in order.iter().take(drop) {
                remove[i] = true;
            }
            let mut idx = 0;
            pop.members.retain(|_| {
                let keep = !remove[idx];
                idx += 1;
                keep
            });
        }
    } else {
        let add = step.min(max_pop.saturating_sub(n));
        for _ in 0..add {
            pop.members.push(Candidate::new(sample_uniform(bounds, rng)));
        }
    }
    pop
}

/// Members sorted worst first: descending penalized value, later index first
/// among ties. The lowest-index best member is therefore always last.
fn worst_first(pop: &Population) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pop.len()).collect();
    order.sort_by(|&a, &b| {
        let pa = pop.members[a].penalized.unwrap_or(f64::INFINITY);
        let pb = pop.members[b].penalized.unwrap_or(f64::INFINITY);
        pb.total_cmp(&pa).then(b.cmp(&a))
    });
    order
}

/// Adaptive population step for the single-objective solver. Shrinking drops
/// the worst-penalized members and never the current best.
pub fn adapt_population<R: UniformSource + ?Sized>(
    pop: Population,
    improved_recently: bool,
    cfg: &SolverConfig,
    bounds: &Bounds,
    rng: &mut R,
) -> Population {
    resize_population(
        pop,
        improved_recently,
        cfg.min_pop(),
        cfg.max_pop(),
        bounds,
        rng,
        worst_first,
    )
}

/// Minimizes (or maximizes, per `cfg.sense`) `objective` over `bounds`.
pub fn jaya<F>(objective: F, bounds: &Bounds, cs: &ConstraintSet, cfg: &SolverConfig) -> Result<RunResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    cfg.validate()?;
    let seed = cfg.resolve_seed();
    let mut rng = RngStream::new(seed);
    let evaluator = Evaluator::new(cfg.workers)?;
    let objectives = [(&objective, cfg.sense)];
    let eval = |x: &Vec<f64>| evaluate_point(x, &objectives, cs);

    let mut pop = initialize_population(bounds, cfg.pop_size, &mut rng)?;
    let mut evaluations = 0;
    let mut insertions = 0;
    evaluate_pending(&mut pop, &evaluator, &eval, &mut evaluations)?;

    let mut history: Vec<IterationRecord> = Vec::with_capacity(cfg.max_iter);
    let mut best_series: Vec<f64> = Vec::with_capacity(cfg.max_iter);
    let mut stopped_early = false;

    for t in 1..=cfg.max_iter {
        let (best, worst) = select_best_worst(&pop, Sense::Minimize)?;
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
            let old = member.penalized.expect("population evaluated");
            if e.fitness[0] < old {
                member.x = x;
                member.set_single(e);
            }
        }
        pop.generation = t;

        let pop_size = pop.len();
        let best_penalized = pop.penalized_values()?.into_iter().fold(f64::INFINITY, f64::min);
        history.push(IterationRecord {
            iteration: t,
            best_penalized,
            pop_size,
        });
        best_series.push(best_penalized);

        if let Some(es) = cfg.early_stop {
            if early_stop_check(&best_series, es.tolerance, es.patience) {
                stopped_early = true;
                break;
            }
        }
        if cfg.adaptive_pop && t < cfg.max_iter {
            if let Some(improved) = improved_recently(&best_series, cfg.stall_window(), cfg.stall_tolerance()) {
                let before = evaluations;
                pop = adapt_population(pop, improved, cfg, bounds, &mut rng);
                evaluate_pending(&mut pop, &evaluator, &eval, &mut evaluations)?;
                insertions += evaluations - before;
            }
        }
    }

    let (best, _) = select_best_worst(&pop, Sense::Minimize)?;
    let champion = &pop.members[best];
    Ok(RunResult {
        best_x: champion.x.clone(),
        best_value: champion.raw_objectives[0],
        best_penalized: champion.penalized.expect("population evaluated"),
        iterations_run: history.len(),
        history,
        stopped_early,
        evaluations,
        adaptive_insertions: insertions,
        initial_pop_size: cfg.pop_size,
        final_pop_size: pop.len(),
        seed,
        sense: cfg.sense,
        bounds: bounds.clone(),
        max_iter: cfg.max_iter,
    })
}

fn evaluate_pending<E>(pop: &mut Population, evaluator: &Evaluator, eval: &E, counter: &mut usize) -> Result<()>
where
    E: Fn(&Vec<f64>) -> Result<crate::population::Evaluation> + Sync + Send,
{
    let pending: Vec<usize> = (0..pop.len()).filter(|&i| !pop.members[i].is_evaluated()).collect();
    if pending.is_empty() {
        return Ok(());
    }
    let xs: Vec<Vec<f64>> = pending.iter().map(|&i| pop.members[i].x.clone()).collect();
    let results = evaluator.map(&xs, eval)?;
    *counter += xs.len();
    for (i, e) in pending.into_iter().zip(results) {
        pop.members[i].set_single(e);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::JayaError;

    fn evaluated(values: &[f64]) -> Population {
        Population {
            members: values
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let mut c = Candidate::new(vec![i as f64]);
                    c.penalized = Some(*v);
                    c
                })
                .collect(),
            generation: 0,
        }
    }

    #[test]
    fn early_stop_flat_history() {
        assert!(early_stop_check(&[5.0, 5.0, 5.0, 5.0], 1e-3, 3));
    }

    #[test]
    fn early_stop_improving_history() {
        assert!(!early_stop_check(&[5.0, 4.0, 3.0, 2.0], 1e-3, 3));
    }

    #[test]
    fn early_stop_small_gain() {
        // 5.0 - 4.9991 = 9e-4 < 1e-3
        assert!(early_stop_check(&[5.0, 4.9995, 4.9991], 1e-3, 2));
    }

    #[test]
    fn early_stop_needs_patience_plus_one() {
        assert!(!early_stop_check(&[5.0, 5.0, 5.0], 1e-3, 3));
    }

    #[test]
    fn improvement_signal() {
        assert_eq!(improved_recently(&[3.0, 2.0], 5, 0.0), None);
        assert_eq!(improved_recently(&[3.0, 3.0, 3.0], 2, 0.0), Some(false));
        assert_eq!(improved_recently(&[3.0, 2.5, 2.0], 2, 0.0), Some(true));
        assert_eq!(improved_recently(&[3.0, 2.9999, 2.9995], 2, 1e-3), Some(false));
    }

    #[test]
    fn grow_capped_at_max() {
        let cfg = SolverConfig::new(100, 10).with_adaptive(50, 100);
        let b = Bounds::uniform(1, 0.0, 1.0).unwrap();
        let pop = evaluated(&vec![1.0; 100]);
        let out = adapt_population(pop, false, &cfg, &b, &mut RngStream::new(0));
        assert_eq!(out.len(), 100);
    }

    #[test]
    fn grow_by_ten_percent_rounded_up() {
        let cfg = SolverConfig::new(55, 10).with_adaptive(50, 200);
        let b = Bounds::uniform(1, 0.0, 1.0).unwrap();
        let out = adapt_population(evaluated(&vec![1.0; 55]), false, &cfg, &b, &mut RngStream::new(0));
        assert_eq!(out.len(), 61);
        assert!(out.members[55..].iter().all(|c| !c.is_evaluated() && b.contains(&c.x)));
    }

    #[test]
    fn shrink_drops_the_ten_worst() {
        let cfg = SolverConfig::new(100, 10).with_adaptive(50, 200);
        let b = Bounds::uniform(1, 0.0, 1.0).unwrap();
        let mut rng = RngStream::new(11);
        let values: Vec<f64> = (0..100).map(|_| rng.next_uniform()).collect();
        let out = adapt_population(evaluated(&values), true, &cfg, &b, &mut rng);
        assert_eq!(out.len(), 90);

        // Oracle: the ten largest values by a plain sort.
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let cutoff = sorted[9];
        let removed: Vec<f64> = values
            .iter()
            .enumerate()
            .filter(|(i, _)| !out.members.iter().any(|c| c.x[0] == *i as f64))
            .map(|(_, v)| *v)
            .collect();
        assert_eq!(removed.len(), 10);
        assert!(removed.iter().all(|v| *v >= cutoff));
        // Order of survivors is preserved.
        let ids: Vec<f64> = out.members.iter().map(|c| c.x[0]).collect();
        assert!(ids.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn shrink_floor() {
        let cfg = SolverConfig::new(50, 10).with_adaptive(50, 200);
        let b = Bounds::uniform(1, 0.0, 1.0).unwrap();
        let out = adapt_population(evaluated(&vec![1.0; 50]), true, &cfg, &b, &mut RngStream::new(0));
        assert_eq!(out.len(), 50);
    }

    #[test]
    fn shrink_keeps_best_under_ties() {
        let cfg = SolverConfig::new(4, 10).with_adaptive(2, 8);
        let b = Bounds::uniform(1, 0.0, 1.0).unwrap();
        let out = adapt_population(evaluated(&[1.0, 1.0, 1.0, 1.0]), true, &cfg, &b, &mut RngStream::new(0));
        assert_eq!(out.len(), 3);
        assert_eq!(out.members[0].x, vec![0.0]);
    }

    #[test]
    fn constant_objective_is_flat() {
        let b = Bounds::uniform(2, -1.0, 1.0).unwrap();
        let cfg = SolverConfig::new(5, 1).with_seed(1).with_workers(1);
        let r = jaya(|_| 7.0, &b, &ConstraintSet::new(), &cfg).unwrap();
        assert_eq!(r.best_value, 7.0);
        assert_eq!(r.history.len(), 1);
        let r = jaya(
            |_| 7.0,
            &b,
            &ConstraintSet::new(),
            &SolverConfig::new(5, 10).with_seed(1),
        )
        .unwrap();
        assert!(r.history.iter().all(|h| h.best_penalized == 7.0));
    }

    #[test]
    fn quadratic_one_variable() {
        let b = Bounds::uniform(1, 0.0, 10.0).unwrap();
        let cfg = SolverConfig::new(10, 200).with_seed(5).with_workers(1);
        let r = jaya(|x| (x[0] - 3.0).powi(2), &b, &ConstraintSet::new(), &cfg).unwrap();
        assert!((r.best_x[0] - 3.0).abs() <= 1e-4, "best_x = {:?}", r.best_x);
    }

    #[test]
    fn non_finite_objective_aborts() {
        let b = Bounds::uniform(1, -1.0, 1.0).unwrap();
        let cfg = SolverConfig::new(4, 3).with_seed(1);
        let err = jaya(
            |x| if x[0] > 0.0 { f64::NAN } else { 0.0 },
            &b,
            &ConstraintSet::new(),
            &cfg,
        )
        .unwrap_err();
        assert!(matches!(err, JayaError::NonFiniteObjective { .. }));
    }

    #[test]
    fn invalid_config_rejected() {
        let b = Bounds::uniform(1, -1.0, 1.0).unwrap();
        let err = jaya(|x| x[0], &b, &ConstraintSet::new(), &SolverConfig::new(1, 3)).unwrap_err();
        assert!(matches!(err, JayaError::InvalidConfig(_)));
    }

    #[test]
    fn budget_formula_non_adaptive() {
        let b = Bounds::uniform(2, -5.0, 5.0).unwrap();
        let cfg = SolverConfig::new(12, 17).with_seed(3);
        let r = jaya(|x| x[0] * x[0] + x[1] * x[1], &b, &ConstraintSet::new(), &cfg).unwrap();
        let expected = 12 + r.history.iter().map(|h| h.pop_size).sum::<usize>();
        assert_eq!(r.evaluations, expected);
        assert_eq!(r.adaptive_insertions, 0);
    }

    #[test]
    fn budget_formula_adaptive() {
        let b = Bounds::uniform(2, -5.0, 5.0).unwrap();
        let cfg = SolverConfig::new(20, 60).with_seed(3).with_adaptive(10, 40);
        let r = jaya(|x| x[0].abs() + x[1].abs(), &b, &ConstraintSet::new(), &cfg).unwrap();
        let expected = 20 + r.history.iter().map(|h| h.pop_size).sum::<usize>() + r.adaptive_insertions;
        assert_eq!(r.evaluations, expected);
        assert!(r.history.iter().all(|h| (10..=40).contains(&h.pop_size)));
    }

    #[test]
    fn constrained_prefers_feasible() {
        // min x0 + x1 subject to x0 + x1 >= 1 on [0, 2]^2
        let b = Bounds::uniform(2, 0.0, 2.0).unwrap();
        let cs = ConstraintSet::new().push(|x| 1.0 - x[0] - x[1]);
        let cfg = SolverConfig::new(30, 200).with_seed(8);
        let r = jaya(|x| x[0] + x[1], &b, &cs, &cfg).unwrap();
        assert!(r.best_value >= 1.0 - 1e-3 && r.best_value <= 1.01, "{}", r.best_value);
    }
}
