//! Parameter-free Jaya optimization.
//!
//! Jaya moves every candidate toward the best member of the population and
//! away from the worst one, with no tuning knobs beyond population size and
//! iteration budget. This crate provides:
//!
//! * [`jaya`] for single-objective problems with penalty-based constraints,
//!   adaptive population sizing, early stopping and parallel evaluation;
//! * [`jaya_multi`] for multi-objective problems, tracking a Pareto archive;
//! * the five classic benchmark functions and a suite runner ([`benchmarks`]);
//! * a renewable energy-mix case study ([`energy`]);
//! * the `jaya` command-line harness ([`cli`]).
//!
//! Runs are reproducible: the same seed yields bit-identical results for any
//! number of evaluation workers.

pub mod benchmarks;
pub mod bounds;
pub mod cli;
pub mod config;
pub mod constraints;
pub mod energy;
pub mod error;
pub mod eval;
pub mod multi;
pub mod population;
pub mod rng;
pub mod single;

pub use bounds::{clamp, Bounds};
pub use config::{EarlyStop, SolverConfig};
pub use constraints::{penalize, violation, ConstraintSet};
pub use error::{JayaError, Result};
pub use eval::Objective;
pub use multi::{dominates, jaya_multi, pareto_filter, MultiRunResult, ParetoFront};
pub use population::{initialize_population, jaya_update, select_best_worst, Candidate, Population, Sense};
pub use rng::{RngStream, UniformSource};
pub use single::{adapt_population, early_stop_check, jaya, RunResult};
