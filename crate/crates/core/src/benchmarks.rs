//! Classic single-objective test functions and a suite runner.

use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::bounds::Bounds;
use crate::config::SolverConfig;
use crate::constraints::ConstraintSet;
use crate::error::{JayaError, Result};
use crate::single::jaya;

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64 + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
}

/// Needs at least two variables.
pub fn rosenbrock(x: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(JayaError::Dimension {
            expected: 2,
            got: x.len(),
        });
    }
    Ok(rosenbrock_unchecked(x))
}

fn rosenbrock_unchecked(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

pub fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean_sq = x.iter().map(|v| v * v).sum::<f64>() / n;
    let mean_cos = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    -20.0 * (-0.2 * mean_sq.sqrt()).exp() - mean_cos.exp() + 20.0 + E
}

/// The product runs over 1-based indices: `cos(x_i / sqrt(i))`.
pub fn griewank(x: &[f64]) -> f64 {
    let sum = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    1.0 + sum - prod
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OptimumLocation {
    AllZeros,
    AllOnes,
}

impl OptimumLocation {
    pub fn point(self, n_var: usize) -> Vec<f64> {
        match self {
            OptimumLocation::AllZeros => vec![0.0; n_var],
            OptimumLocation::AllOnes => vec![1.0; n_var],
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BenchmarkProblem {
    pub name: &'static str,
    pub f: fn(&[f64]) -> f64,
    pub lower: f64,
    pub upper: f64,
    pub min_dim: usize,
    pub known_optimum_value: f64,
    pub known_optimum_x: OptimumLocation,
}

/// Tolerance for the registered optimum check.
pub const OPTIMUM_TOLERANCE: f64 = 1e-12;

impl BenchmarkProblem {
    pub fn default_bounds(&self, n_var: usize) -> Result<Bounds> {
        self.check_dim(n_var)?;
        Bounds::uniform(n_var, self.lower, self.upper)
    }

    pub fn check_dim(&self, n_var: usize) -> Result<()> {
        if n_var < self.min_dim {
            return Err(JayaError::Dimension {
                expected: self.min_dim,
                got: n_var,
            });
        }
        Ok(())
    }

    pub fn optimum_x(&self, n_var: usize) -> Vec<f64> {
        self.known_optimum_x.point(n_var)
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        Ok((self.f)(x))
    }

    /// Checks the registered optimum for dimensions `min_dim..=max_dim`.
    pub fn verify_optimum(&self, max_dim: usize) -> Result<()> {
        for n in self.min_dim..=max_dim.max(self.min_dim) {
            let v = (self.f)(&self.optimum_x(n));
            if (v - self.known_optimum_value).abs() > OPTIMUM_TOLERANCE {
                return Err(JayaError::InvalidConfig(format!(
                    "{}: f(x*) = {v} at n = {n}, expected {}",
                    self.name, self.known_optimum_value
                )));
            }
        }
        Ok(())
    }
}

pub const SPHERE: BenchmarkProblem = BenchmarkProblem {
    name: "sphere",
    f: sphere,
    lower: -5.12,
    upper: 5.12,
    min_dim: 1,
    known_optimum_value: 0.0,
    known_optimum_x: OptimumLocation::AllZeros,
};

pub const RASTRIGIN: BenchmarkProblem = BenchmarkProblem {
    name: "rastrigin",
    f: rastrigin,
    lower: -5.12,
    upper: 5.12,
    min_dim: 1,
    known_optimum_value: 0.0,
    known_optimum_x: OptimumLocation::AllZeros,
};

pub const ROSENBROCK: BenchmarkProblem = BenchmarkProblem {
    name: "rosenbrock",
    f: rosenbrock_unchecked,
    lower: -5.0,
    upper: 10.0,
    min_dim: 2,
    known_optimum_value: 0.0,
    known_optimum_x: OptimumLocation::AllOnes,
};

pub const ACKLEY: BenchmarkProblem = BenchmarkProblem {
    name: "ackley",
    f: ackley,
    lower: -32.768,
    upper: 32.768,
    min_dim: 1,
    known_optimum_value: 0.0,
    known_optimum_x: OptimumLocation::AllZeros,
};

pub const GRIEWANK: BenchmarkProblem = BenchmarkProblem {
    name: "griewank",
    f: griewank,
    lower: -600.0,
    upper: 600.0,
    min_dim: 1,
    known_optimum_value: 0.0,
    known_optimum_x: OptimumLocation::AllZeros,
};

pub fn all_problems() -> Vec<BenchmarkProblem> {
    vec![SPHERE, RASTRIGIN, ROSENBROCK, ACKLEY, GRIEWANK]
}

pub fn problem_by_name(name: &str) -> Option<BenchmarkProblem> {
    all_problems().into_iter().find(|p| p.name.eq_ignore_ascii_case(name))
}

/// One solver run of the suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteRow {
    pub problem: String,
    pub n_var: usize,
    pub pop_size: usize,
    pub max_iter: usize,
    pub seed: u64,
    pub achieved: f64,
    pub evaluations: usize,
    pub stopped_early: bool,
}

/// Best, median and worst achieved value of one problem across seeds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemSummary {
    pub problem: String,
    pub runs: usize,
    pub best: f64,
    pub median: f64,
    pub worst: f64,
    pub mean_evaluations: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteReport {
    pub rows: Vec<SuiteRow>,
    pub summaries: Vec<ProblemSummary>,
}

impl SuiteReport {
    pub fn summary(&self, problem: &str) -> Option<&ProblemSummary> {
        self.summaries.iter().find(|s| s.problem == problem)
    }
}

/// Median of a nonempty slice; even lengths average the two middle values.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Runs [`jaya`] on every problem for every seed over each problem's default
/// box in `n_var` dimensions. `cfg.seed` is ignored in favour of `seeds`.
pub fn run_suite(
    problems: &[BenchmarkProblem],
    n_var: usize,
    cfg: &SolverConfig,
    seeds: &[u64],
) -> Result<SuiteReport> {
    if problems.is_empty() {
        return Err(JayaError::InvalidConfig(
            "benchmark suite needs at least one problem".into(),
        ));
    }
    if seeds.is_empty() {
        return Err(JayaError::InvalidConfig(
            "benchmark suite needs at least one seed".into(),
        ));
    }
    let mut report = SuiteReport::default();
    for problem in problems {
        let annotate = |e: JayaError| JayaError::Problem {
            name: problem.name.to_string(),
            source: Box::new(e),
        };
        let bounds = problem.default_bounds(n_var).map_err(annotate)?;
        let mut achieved = Vec::with_capacity(seeds.len());
        let mut evals = 0usize;
        for &seed in seeds {
            let mut run_cfg = cfg.clone();
            run_cfg.seed = Some(seed);
            let r = jaya(problem.f, &bounds, &ConstraintSet::new(), &run_cfg).map_err(annotate)?;
            achieved.push(r.best_value);
            evals += r.evaluations;
            report.rows.push(SuiteRow {
                problem: problem.name.to_string(),
                n_var,
                pop_size: cfg.pop_size,
                max_iter: cfg.max_iter,
                seed,
                achieved: r.best_value,
                evaluations: r.evaluations,
                stopped_early: r.stopped_early,
            });
        }
        report.summaries.push(ProblemSummary {
            problem: problem.name.to_string(),
            runs: achieved.len(),
            best: achieved.iter().copied().fold(f64::INFINITY, f64::min),
            median: median(&achieved),
            worst: achieved.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean_evaluations: evals as f64 / achieved.len() as f64,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sphere_values() {
        assert_eq!(sphere(&[0.0, 0.0, 0.0]), 0.0);
        assert_eq!(sphere(&[1.0, 2.0]), 5.0);
        assert_eq!(sphere(&[-3.0]), 9.0);
    }

    #[test]
    fn rastrigin_values() {
        assert_eq!(rastrigin(&[0.0; 5]), 0.0);
        assert!((rastrigin(&[1.0, 1.0]) - 2.0).abs() <= 1e-9);
    }

    #[test]
    fn rosenbrock_values() {
        assert_eq!(rosenbrock(&[1.0; 4]).unwrap(), 0.0);
        assert_eq!(rosenbrock(&[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(rosenbrock(&[1.0, 2.0]).unwrap(), 100.0);
        assert!(matches!(rosenbrock(&[1.0]), Err(JayaError::Dimension { .. })));
    }

    #[test]
    fn ackley_values() {
        assert!(ackley(&[0.0, 0.0]).abs() <= 1e-15);
        // 50-digit mpmath evaluation of the same formula.
        assert!((ackley(&[1.0, 1.0]) - 3.625_384_938_440_362_8).abs() <= 1e-12);
        assert!((ackley(&[0.5, -1.25, 2.0]) - 6.578_224_184_265_054).abs() <= 1e-12);
    }

    #[test]
    fn griewank_values() {
        assert_eq!(griewank(&[0.0, 0.0]), 0.0);
        let expected = 2.0 + PI * PI / 4000.0;
        assert!((griewank(&[PI, 0.0]) - expected).abs() <= 1e-12);
    }

    #[test]
    fn registered_optima_hold() {
        for p in all_problems() {
            p.verify_optimum(30).unwrap();
        }
    }

    #[test]
    fn lookup_and_bounds() {
        assert_eq!(problem_by_name("Rosenbrock").unwrap().name, "rosenbrock");
        assert!(problem_by_name("nope").is_none());
        assert!(ROSENBROCK.default_bounds(1).is_err());
        let b = GRIEWANK.default_bounds(3).unwrap();
        assert_eq!(b.lower(), &[-600.0; 3]);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn suite_single_row() {
        let cfg = SolverConfig::new(10, 5);
        let r = run_suite(&[SPHERE], 2, &cfg, &[1]).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert!(r.rows[0].achieved >= 0.0);
        assert_eq!(r.rows[0].evaluations, 10 + 5 * 10);
    }

    #[test]
    fn suite_rejects_empty() {
        let cfg = SolverConfig::new(10, 5);
        assert!(matches!(
            run_suite(&[], 2, &cfg, &[1]),
            Err(JayaError::InvalidConfig(_))
        ));
        assert!(matches!(
            run_suite(&[SPHERE], 2, &cfg, &[]),
            Err(JayaError::InvalidConfig(_))
        ));
    }

    #[test]
    fn suite_error_names_problem() {
        let cfg = SolverConfig::new(10, 5);
        match run_suite(&[ROSENBROCK], 1, &cfg, &[1]) {
            Err(JayaError::Problem { name, .. }) => assert_eq!(name, "rosenbrock"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn suite_monotone_in_budget() {
        let short = SolverConfig::new(20, 30).with_workers(1);
        let long = SolverConfig::new(20, 90).with_workers(1);
        let a = run_suite(&all_problems(), 2, &short, &[3, 4]).unwrap();
        let b = run_suite(&all_problems(), 2, &long, &[3, 4]).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert!(rb.achieved <= ra.achieved, "{} seed {}", ra.problem, ra.seed);
            assert!(ra.achieved >= 0.0);
        }
    }

    proptest! {
        #[test]
        fn even_functions(x in proptest::collection::vec(-30.0f64..30.0, 1..8)) {
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            prop_assert_eq!(sphere(&x), sphere(&neg));
            prop_assert_eq!(rastrigin(&x), rastrigin(&neg));
            prop_assert_eq!(ackley(&x), ackley(&neg));
            prop_assert_eq!(griewank(&x), griewank(&neg));
        }

        #[test]
        fn nonnegative_on_default_boxes(u in proptest::collection::vec(0.0f64..=1.0, 2..8)) {
            for p in all_problems() {
                let x: Vec<f64> = u.iter().map(|t| p.lower + t * (p.upper - p.lower)).collect();
                // Ackley can dip a few ulps below zero near the origin.
                prop_assert!((p.f)(&x) >= -1e-15, "{} at {:?}", p.name, x);
            }
        }
    }
}
