//! Command-line harness: configuration, dispatch and report emitters.
//!
//! A run is configured by an optional TOML file plus flags; flags win. Keys
//! in the file follow the argument names of the original R interface
//! (`popSize`, `maxiter`, `n_var`, `adaptive_pop`, ...).
//!
//! Outputs are written to the output directory:
//!
//! * `history.csv`: `iteration, best_penalized, pop_size` (single mode)
//! * `front.csv`: `x1..xn, f1..fk` (multi mode)
//! * `multi_history.csv`: `iteration, front_size, pop_size, ideal1..idealk`
//! * `population.csv`: final population, same layout as `front.csv`
//! * `energy_front.csv`: `wind, solar, hydro, storage, total, emissions, cost, reliability`
//! * `suite.csv`: `problem, n_var, pop_size, max_iter, seed, achieved, evaluations, stopped_early`
//!
//! With `--format json-lines` each file becomes `.jsonl` with one object per
//! row and the same field names. CSV floats are printed with 17 significant
//! digits, which round-trips every `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Deserialize;
use thiserror::Error;

use crate::benchmarks::{self, all_problems, problem_by_name, run_suite, BenchmarkProblem, SuiteReport};
use crate::bounds::Bounds;
use crate::config::{EarlyStop, SolverConfig, DEFAULT_POP_SIZE};
use crate::constraints::ConstraintSet;
use crate::energy::{run_energy_case, EnergyCaseConfig, EnergyCaseResult, EnergyModel};
use crate::error::JayaError;
use crate::eval::Objective;
use crate::multi::{jaya_multi, MultiRunResult};
use crate::population::Sense;
use crate::single::{jaya, RunResult};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("missing required field(s): {}", .0.join(", "))]
    MissingFields(Vec<String>),
    #[error("conflicting modes: config file says `{file}` but flags say `{flag}`")]
    ConflictingModes { file: String, flag: String },
    #[error("unknown problem `{problem}` for mode {mode}")]
    UnknownProblem { mode: String, problem: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("cannot parse config file: {0}")]
    Parse(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Solver(#[from] JayaError),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    BenchmarkSuite,
    Single,
    Multi,
    EnergyCase,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::BenchmarkSuite => "benchmark-suite",
            Mode::Single => "single",
            Mode::Multi => "multi",
            Mode::EnergyCase => "energy-case",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    JsonLines,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::JsonLines => "jsonl",
        }
    }
}

#[derive(Debug, Clone, Default, Parser)]
#[command(name = "jaya", version, about = "Parameter-free Jaya optimizer")]
pub struct CliArgs {
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Benchmark name (single), built-in problem (multi) or comma-separated list (suite).
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(long = "n-var")]
    pub n_var: Option<usize>,
    #[arg(long = "pop-size")]
    pub pop_size: Option<usize>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "adaptive-pop")]
    pub adaptive_pop: bool,
    #[arg(long = "min-pop")]
    pub min_pop: Option<usize>,
    #[arg(long = "max-pop")]
    pub max_pop: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub patience: Option<usize>,
    /// Seeds per problem in benchmark-suite mode.
    #[arg(long)]
    pub repetitions: Option<usize>,
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Evaluation workers; defaults to the number of available cores.
    #[arg(long)]
    pub workers: Option<usize>,
}

const FILE_KEYS: &[&str] = &[
    "mode",
    "problem",
    "n_var",
    "popSize",
    "maxiter",
    "seed",
    "adaptive_pop",
    "min_pop",
    "max_pop",
    "tolerance",
    "patience",
    "repetitions",
    "out_dir",
    "format",
    "workers",
    "sense",
    "lower",
    "upper",
    "energy",
];

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    mode: Option<Mode>,
    problem: Option<String>,
    n_var: Option<usize>,
    #[serde(rename = "popSize")]
    pop_size: Option<usize>,
    #[serde(rename = "maxiter")]
    max_iter: Option<usize>,
    seed: Option<u64>,
    adaptive_pop: Option<bool>,
    min_pop: Option<usize>,
    max_pop: Option<usize>,
    tolerance: Option<f64>,
    patience: Option<usize>,
    repetitions: Option<usize>,
    out_dir: Option<PathBuf>,
    format: Option<OutputFormat>,
    workers: Option<usize>,
    sense: Option<Sense>,
    lower: Option<Vec<f64>>,
    upper: Option<Vec<f64>>,
    energy: Option<EnergyTable>,
}

/// `[energy]` table of the config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnergyTable {
    model: Option<EnergyModel>,
    share_lower: Option<f64>,
    share_upper: Option<f64>,
    min_total: Option<f64>,
}

pub const DEFAULT_OUT_DIR: &str = "jaya-out";
pub const DEFAULT_REPETITIONS: usize = 10;
pub const DEFAULT_SUITE_N_VAR: usize = 2;
pub const DEFAULT_SUITE_SEED: u64 = 1;
/// Patience used when only `tolerance` is given.
pub const DEFAULT_PATIENCE: usize = 10;

/// Built-in multi-objective problems.
pub const MULTI_PROBLEMS: &[&str] = &["two-sphere", "coordinates"];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub problem: Option<String>,
    pub n_var: usize,
    pub solver: SolverConfig,
    pub repetitions: usize,
    pub bounds: Option<Bounds>,
    pub energy: EnergyCaseConfig,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

/// Reads the file named by `--config` (if any) and merges it with the flags.
pub fn load_config(args: &CliArgs) -> CliResult<RunConfig> {
    let text = match &args.config {
        Some(path) => Some(fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?),
        None => None,
    };
    parse_config(text.as_deref(), args)
}

/// Builds a validated [`RunConfig`] from config-file text and flags.
pub fn parse_config(file: Option<&str>, args: &CliArgs) -> CliResult<RunConfig> {
    let file_cfg = match file {
        Some(text) => parse_file(text)?,
        None => FileConfig::default(),
    };

    let mode = match (file_cfg.mode, args.mode) {
        (Some(f), Some(a)) if f != a => {
            return Err(CliError::ConflictingModes {
                file: f.as_str().into(),
                flag: a.as_str().into(),
            })
        }
        (f, a) => a.or(f),
    };
    let problem = args.problem.clone().or(file_cfg.problem);
    let n_var = args.n_var.or(file_cfg.n_var);
    let max_iter = args.max_iter.or(file_cfg.max_iter);

    let Some(mode) = mode else {
        let mut missing = vec!["mode".to_string()];
        if max_iter.is_none() {
            missing.push("maxiter".into());
        }
        return Err(CliError::MissingFields(missing));
    };

    let mut missing = Vec::new();
    if matches!(mode, Mode::Single | Mode::Multi) {
        if problem.is_none() {
            missing.push("problem".to_string());
        }
        if n_var.is_none() {
            missing.push("n_var".into());
        }
    }
    if mode != Mode::EnergyCase && max_iter.is_none() {
        missing.push("maxiter".into());
    }
    if !missing.is_empty() {
        return Err(CliError::MissingFields(missing));
    }
    if max_iter == Some(0) {
        return Err(CliError::Invalid("maxiter must be at least 1".into()));
    }
    if n_var == Some(0) {
        return Err(CliError::Invalid("n_var must be at least 1".into()));
    }

    let energy_defaults = EnergyCaseConfig::default();
    let is_energy = mode == Mode::EnergyCase;

    let pop_size = args.pop_size.or(file_cfg.pop_size).unwrap_or(if is_energy {
        energy_defaults.pop_size
    } else {
        DEFAULT_POP_SIZE
    });
    let max_iter = max_iter.unwrap_or(energy_defaults.max_iter);
    let adaptive_pop = args.adaptive_pop
        || file_cfg
            .adaptive_pop
            .unwrap_or(is_energy && energy_defaults.adaptive_pop);
    let min_pop = args
        .min_pop
        .or(file_cfg.min_pop)
        .or(is_energy.then_some(energy_defaults.min_pop));
    let max_pop = args
        .max_pop
        .or(file_cfg.max_pop)
        .or(is_energy.then_some(energy_defaults.max_pop));
    let tolerance = args
        .tolerance
        .or(file_cfg.tolerance)
        .or(is_energy.then_some(energy_defaults.tolerance));
    let patience = args
        .patience
        .or(file_cfg.patience)
        .or(is_energy.then_some(energy_defaults.patience));
    let early_stop = match (tolerance, patience) {
        (None, None) => None,
        (t, p) => Some(EarlyStop {
            tolerance: t.unwrap_or(1e-3),
            patience: p.unwrap_or(DEFAULT_PATIENCE),
        }),
    };
    let seed = args.seed.or(file_cfg.seed).or(match mode {
        Mode::BenchmarkSuite => Some(DEFAULT_SUITE_SEED),
        Mode::EnergyCase => energy_defaults.seed,
        _ => None,
    });

    let solver = SolverConfig {
        pop_size,
        max_iter,
        sense: file_cfg.sense.unwrap_or_default(),
        seed,
        adaptive_pop,
        min_pop,
        max_pop,
        early_stop,
        workers: args.workers.or(file_cfg.workers),
    };
    solver.validate()?;

    let n_var = n_var.unwrap_or(match mode {
        Mode::EnergyCase => 4,
        _ => DEFAULT_SUITE_N_VAR,
    });

    match mode {
        Mode::Single => {
            let name = problem.as_deref().unwrap_or_default();
            let p = problem_by_name(name).ok_or_else(|| CliError::UnknownProblem {
                mode: mode.as_str().into(),
                problem: name.into(),
            })?;
            p.check_dim(n_var)?;
        }
        Mode::Multi => {
            let name = problem.as_deref().unwrap_or_default();
            if !MULTI_PROBLEMS.contains(&name) {
                return Err(CliError::UnknownProblem {
                    mode: mode.as_str().into(),
                    problem: name.into(),
                });
            }
        }
        Mode::BenchmarkSuite => {
            suite_problems(problem.as_deref())?;
        }
        Mode::EnergyCase => {}
    }

    let bounds = match (file_cfg.lower, file_cfg.upper) {
        (None, None) => None,
        (Some(lo), Some(hi)) => {
            let b = Bounds::new(lo, hi)?;
            if b.n_var() != n_var {
                return Err(CliError::Invalid(format!(
                    "bounds have {} variables but n_var is {n_var}",
                    b.n_var()
                )));
            }
            Some(b)
        }
        _ => return Err(CliError::Invalid("`lower` and `upper` must be given together".into())),
    };

    let table = file_cfg.energy.unwrap_or_default();
    let energy = EnergyCaseConfig {
        model: table.model.unwrap_or_default(),
        share_lower: table.share_lower.unwrap_or(energy_defaults.share_lower),
        share_upper: table.share_upper.unwrap_or(energy_defaults.share_upper),
        min_total: table.min_total.unwrap_or(energy_defaults.min_total),
        pop_size: solver.pop_size,
        max_iter: solver.max_iter,
        adaptive_pop: solver.adaptive_pop,
        min_pop: solver.min_pop(),
        max_pop: solver.max_pop(),
        tolerance: solver.early_stop.map_or(energy_defaults.tolerance, |e| e.tolerance),
        patience: solver.early_stop.map_or(energy_defaults.patience, |e| e.patience),
        seed: solver.seed,
        workers: solver.workers,
    };

    let repetitions = args.repetitions.or(file_cfg.repetitions).unwrap_or(DEFAULT_REPETITIONS);
    if repetitions == 0 {
        return Err(CliError::Invalid("repetitions must be at least 1".into()));
    }

    Ok(RunConfig {
        mode,
        problem,
        n_var,
        solver,
        repetitions,
        bounds,
        energy,
        out_dir: args
            .out_dir
            .clone()
            .or(file_cfg.out_dir)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR)),
        format: args.format.or(file_cfg.format).unwrap_or_default(),
    })
}

fn parse_file(text: &str) -> CliResult<FileConfig> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::Parse(e.message().to_string()))?;
    if let Some(key) = table.keys().find(|k| !FILE_KEYS.contains(&k.as_str())) {
        return Err(CliError::UnknownKey(key.clone()));
    }
    table
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Parse(e.message().to_string()))
}

fn suite_problems(names: Option<&str>) -> CliResult<Vec<BenchmarkProblem>> {
    match names {
        None | Some("all") => Ok(all_problems()),
        Some(list) => list
            .split(',')
            .map(|name| {
                let name = name.trim();
                problem_by_name(name).ok_or_else(|| CliError::UnknownProblem {
                    mode: Mode::BenchmarkSuite.as_str().into(),
                    problem: name.into(),
                })
            })
            .collect(),
    }
}

fn multi_problem(name: &str, n_var: usize) -> CliResult<(Vec<Objective>, Bounds)> {
    let sphere = |x: &[f64]| benchmarks::sphere(x);
    match name {
        "two-sphere" => Ok((
            vec![
                Objective::minimize(sphere),
                Objective::minimize(|x: &[f64]| x.iter().map(|v| (v - 2.0) * (v - 2.0)).sum()),
            ],
            Bounds::uniform(n_var, -5.0, 5.0)?,
        )),
        "coordinates" => {
            if n_var < 2 {
                return Err(CliError::Invalid("problem `coordinates` needs n_var >= 2".into()));
            }
            Ok((
                vec![
                    Objective::minimize(|x: &[f64]| x[0]),
                    Objective::minimize(|x: &[f64]| x[1]),
                ],
                Bounds::uniform(n_var, 0.0, 1.0)?,
            ))
        }
        other => Err(CliError::UnknownProblem {
            mode: Mode::Multi.as_str().into(),
            problem: other.into(),
        }),
    }
}

/// What a finished run produced.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub summary: String,
    pub files: Vec<PathBuf>,
}

/// Runs the configured mode and writes its reports.
pub fn run(cfg: &RunConfig) -> CliResult<RunOutput> {
    fs::create_dir_all(&cfg.out_dir).map_err(|source| CliError::Io {
        path: cfg.out_dir.clone(),
        source,
    })?;
    let path = |stem: &str| cfg.out_dir.join(format!("{stem}.{}", cfg.format.extension()));
    match cfg.mode {
        Mode::Single => {
            let name = cfg.problem.as_deref().unwrap_or_default();
            let p = problem_by_name(name).ok_or_else(|| CliError::UnknownProblem {
                mode: "single".into(),
                problem: name.into(),
            })?;
            let bounds = match &cfg.bounds {
                Some(b) => b.clone(),
                None => p.default_bounds(cfg.n_var)?,
            };
            let result = jaya(p.f, &bounds, &ConstraintSet::new(), &cfg.solver)?;
            let history = path("history");
            emit_history(&result, &history, cfg.format)?;
            Ok(RunOutput {
                summary: emit_summary(&result, Some(p.name)),
                files: vec![history],
            })
        }
        Mode::Multi => {
            let name = cfg.problem.as_deref().unwrap_or_default();
            let (objectives, default_bounds) = multi_problem(name, cfg.n_var)?;
            let bounds = cfg.bounds.clone().unwrap_or(default_bounds);
            let result = jaya_multi(&objectives, &bounds, &ConstraintSet::new(), &cfg.solver)?;
            let files = vec![path("front"), path("multi_history"), path("population")];
            emit_front(&result, &files[0], cfg.format)?;
            emit_multi_history(&result, &files[1], cfg.format)?;
            emit_population(&result, &files[2], cfg.format)?;
            Ok(RunOutput {
                summary: emit_multi_summary(&result, Some(name)),
                files,
            })
        }
        Mode::EnergyCase => {
            let result = run_energy_case(&cfg.energy)?;
            let files = vec![path("energy_front"), path("multi_history")];
            emit_energy_front(&result, &files[0], cfg.format)?;
            emit_multi_history(&result.run, &files[1], cfg.format)?;
            Ok(RunOutput {
                summary: emit_energy_summary(&result),
                files,
            })
        }
        Mode::BenchmarkSuite => {
            let problems = suite_problems(cfg.problem.as_deref())?;
            let base = cfg.solver.seed.unwrap_or(DEFAULT_SUITE_SEED);
            let seeds: Vec<u64> = (0..cfg.repetitions as u64).map(|r| base.wrapping_add(r)).collect();
            let report = run_suite(&problems, cfg.n_var, &cfg.solver, &seeds)?;
            let file = path("suite");
            emit_suite(&report, &file, cfg.format)?;
            Ok(RunOutput {
                summary: emit_suite_summary(&report),
                files: vec![file],
            })
        }
    }
}

/// Parses flags from `argv`, runs, prints the summary. Returns the process
/// exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match CliArgs::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match load_config(&args).and_then(|cfg| run(&cfg)) {
        Ok(out) => {
            print!("{}", out.summary);
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {}", one_line(&e.to_string()));
            1
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_short(v: f64) -> String {
    format!("{v:.6e}")
}

/// Human-readable summary of a single-objective run.
pub fn emit_summary(r: &RunResult, problem: Option<&str>) -> String {
    let n = r.bounds.n_var();
    let mut s = String::new();
    let _ = writeln!(s, "Jaya Algorithm");
    if let Some(p) = problem {
        let _ = writeln!(s, "Problem              = {p}");
    }
    let _ = writeln!(s, "Population Size      = {}", r.initial_pop_size);
    let _ = writeln!(s, "Number of iterations = {}", r.iterations_run);
    let _ = writeln!(s, "Number of variables  = {n}");
    let _ = writeln!(s, "Seed                 = {}", r.seed);
    let _ = writeln!(s, "Evaluations          = {}", r.evaluations);
    let _ = writeln!(
        s,
        "Stopped early        = {}",
        if r.stopped_early { "yes" } else { "no" }
    );
    let _ = writeln!(s);
    let _ = writeln!(s, "Objective: {}", r.sense.as_str());
    let _ = writeln!(s);
    write_limits(&mut s, &r.bounds);
    let _ = writeln!(s);
    let _ = writeln!(s, "Best Result:");
    let header: Vec<String> = (1..=n)
        .map(|i| format!("Best.x{i}"))
        .chain(["Best.f.x.".to_string()])
        .collect();
    let values: Vec<String> = r
        .best_x
        .iter()
        .map(|v| fmt_short(*v))
        .chain([fmt_short(r.best_value)])
        .collect();
    let widths: Vec<usize> = header.iter().zip(&values).map(|(h, v)| h.len().max(v.len())).collect();
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(s, "     {}", line(&header));
    let _ = writeln!(s, "Best {}", line(&values));
    s
}

fn write_limits(s: &mut String, bounds: &Bounds) {
    let _ = writeln!(s, "Limits:");
    for (i, (lo, hi)) in bounds.lower().iter().zip(bounds.upper()).enumerate() {
        let _ = writeln!(s, "x{} = [{lo}, {hi}]", i + 1);
    }
}

/// Human-readable summary of a multi-objective run.
pub fn emit_multi_summary(r: &MultiRunResult, problem: Option<&str>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Jaya Multi-Objective Algorithm");
    if let Some(p) = problem {
        let _ = writeln!(s, "Problem              = {p}");
    }
    let _ = writeln!(s, "Population Size      = {}", r.initial_pop_size);
    let _ = writeln!(s, "Number of iterations = {}", r.iterations_run);
    let _ = writeln!(s, "Number of variables  = {}", r.bounds.n_var());
    let _ = writeln!(s, "Number of objectives = {}", r.senses.len());
    let _ = writeln!(s, "Seed                 = {}", r.seed);
    let _ = writeln!(s, "Evaluations          = {}", r.evaluations);
    let _ = writeln!(
        s,
        "Stopped early        = {}",
        if r.stopped_early { "yes" } else { "no" }
    );
    let _ = writeln!(s);
    let senses: Vec<&str> = r.senses.iter().map(|x| x.as_str()).collect();
    let _ = writeln!(s, "Objectives: {}", senses.join(", "));
    let _ = writeln!(s);
    write_limits(&mut s, &r.bounds);
    let _ = writeln!(s);
    let _ = writeln!(s, "Pareto front size    = {}", r.front.len());
    if !r.front.feasible_found() {
        let _ = writeln!(s, "No feasible solution found; front holds the least-violating points");
    }
    let _ = writeln!(s, "Best per objective:");
    for (k, v) in r.front_extremes().iter().enumerate() {
        let _ = writeln!(s, "f{} = {}", k + 1, fmt_short(*v));
    }
    if let Some(ideal) = r.ideal_point() {
        let cells: Vec<String> = ideal.iter().map(|v| fmt_short(*v)).collect();
        let _ = writeln!(s, "Ideal point (minimize form) = ({})", cells.join(", "));
    }
    s
}

pub fn emit_energy_summary(r: &EnergyCaseResult) -> String {
    let mut s = emit_multi_summary(&r.run, Some("energy-case (emissions, cost, reliability)"));
    let _ = writeln!(s, "Minimum total share  = {}", r.config.min_total);
    let _ = writeln!(s, "Feasible             = {}", if r.feasible() { "yes" } else { "no" });
    s
}

pub fn emit_suite_summary(report: &SuiteReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Jaya Benchmark Suite");
    let _ = writeln!(
        s,
        "{:<12} {:>5} {:>14} {:>14} {:>14} {:>12}",
        "problem", "runs", "best", "median", "worst", "mean evals"
    );
    for p in &report.summaries {
        let _ = writeln!(
            s,
            "{:<12} {:>5} {:>14} {:>14} {:>14} {:>12.1}",
            p.problem,
            p.runs,
            fmt_short(p.best),
            fmt_short(p.median),
            fmt_short(p.worst),
            p.mean_evaluations
        );
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_float(*v),
            Cell::Text(v) => v.clone(),
            Cell::Bool(v) => v.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => (*v).into(),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, Into::into),
            Cell::Text(v) => v.clone().into(),
            Cell::Bool(v) => (*v).into(),
        }
    }
}

fn write_table(path: &Path, format: OutputFormat, header: &[String], rows: &[Vec<Cell>]) -> CliResult<()> {
    let io = |source: std::io::Error| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_path(path).map_err(|e| io(e.into()))?;
            w.write_record(header).map_err(|e| io(e.into()))?;
            for row in rows {
                w.write_record(row.iter().map(Cell::csv)).map_err(|e| io(e.into()))?;
            }
            w.flush().map_err(io)?;
        }
        OutputFormat::JsonLines => {
            let mut out = std::io::BufWriter::new(fs::File::create(path).map_err(io)?);
            for row in rows {
                let obj: serde_json::Map<String, serde_json::Value> =
                    header.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                serde_json::to_writer(&mut out, &obj).map_err(|e| io(e.into()))?;
                out.write_all(b"\n").map_err(io)?;
            }
            out.flush().map_err(io)?;
        }
    }
    Ok(())
}

fn names(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (1..=n).map(move |i| format!("{prefix}{i}"))
}

/// Convergence history: `iteration, best_penalized, pop_size`.
pub fn emit_history(r: &RunResult, path: &Path, format: OutputFormat) -> CliResult<()> {
    let header = ["iteration", "best_penalized", "pop_size"].map(String::from);
    let rows: Vec<Vec<Cell>> = r
        .history
        .iter()
        .map(|h| {
            vec![
                Cell::Int(h.iteration as u64),
                Cell::Float(h.best_penalized),
                Cell::Int(h.pop_size as u64),
            ]
        })
        .collect();
    write_table(path, format, &header, &rows)
}

fn solutions_table<'a>(
    n_var: usize,
    n_obj: usize,
    items: impl Iterator<Item = (&'a [f64], &'a [f64])>,
) -> (Vec<String>, Vec<Vec<Cell>>) {
    let header: Vec<String> = names("x", n_var).chain(names("f", n_obj)).collect();
    let rows = items
        .map(|(x, f)| x.iter().chain(f).map(|v| Cell::Float(*v)).collect())
        .collect();
    (header, rows)
}

/// Pareto front: `x1..xn, f1..fk` with raw objective values.
pub fn emit_front(r: &MultiRunResult, path: &Path, format: OutputFormat) -> CliResult<()> {
    let (header, rows) = solutions_table(
        r.bounds.n_var(),
        r.senses.len(),
        r.front
            .entries
            .iter()
            .map(|e| (e.x.as_slice(), e.objectives.as_slice())),
    );
    write_table(path, format, &header, &rows)
}

pub fn emit_population(r: &MultiRunResult, path: &Path, format: OutputFormat) -> CliResult<()> {
    let (header, rows) = solutions_table(
        r.bounds.n_var(),
        r.senses.len(),
        r.final_population
            .iter()
            .map(|e| (e.x.as_slice(), e.objectives.as_slice())),
    );
    write_table(path, format, &header, &rows)
}

pub fn emit_multi_history(r: &MultiRunResult, path: &Path, format: OutputFormat) -> CliResult<()> {
    let header: Vec<String> = ["iteration", "front_size", "pop_size"]
        .into_iter()
        .map(String::from)
        .chain(names("ideal", r.senses.len()))
        .collect();
    let rows: Vec<Vec<Cell>> = r
        .history
        .iter()
        .map(|h| {
            [
                Cell::Int(h.iteration as u64),
                Cell::Int(h.front_size as u64),
                Cell::Int(h.pop_size as u64),
            ]
            .into_iter()
            .chain(h.ideal_point.iter().map(|v| Cell::Float(*v)))
            .collect()
        })
        .collect();
    write_table(path, format, &header, &rows)
}

pub fn emit_energy_front(r: &EnergyCaseResult, path: &Path, format: OutputFormat) -> CliResult<()> {
    let header = [
        "wind",
        "solar",
        "hydro",
        "storage",
        "total",
        "emissions",
        "cost",
        "reliability",
    ]
    .map(String::from);
    let rows: Vec<Vec<Cell>> = r
        .rows
        .iter()
        .map(|e| {
            [
                e.wind,
                e.solar,
                e.hydro,
                e.storage,
                e.total,
                e.emissions,
                e.cost,
                e.reliability,
            ]
            .into_iter()
            .map(Cell::Float)
            .collect()
        })
        .collect();
    write_table(path, format, &header, &rows)
}

pub fn emit_suite(report: &SuiteReport, path: &Path, format: OutputFormat) -> CliResult<()> {
    let header = [
        "problem",
        "n_var",
        "pop_size",
        "max_iter",
        "seed",
        "achieved",
        "evaluations",
        "stopped_early",
    ]
    .map(String::from);
    let rows: Vec<Vec<Cell>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                Cell::Text(r.problem.clone()),
                Cell::Int(r.n_var as u64),
                Cell::Int(r.pop_size as u64),
                Cell::Int(r.max_iter as u64),
                Cell::Int(r.seed),
                Cell::Float(r.achieved),
                Cell::Int(r.evaluations as u64),
                Cell::Bool(r.stopped_early),
            ]
        })
        .collect();
    write_table(path, format, &header, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(argv: &[&str]) -> CliArgs {
        CliArgs::try_parse_from(std::iter::once("jaya").chain(argv.iter().copied())).unwrap()
    }

    #[test]
    fn flags_only_default_pop_size() {
        let cfg = parse_config(
            None,
            &flags(&[
                "--mode",
                "single",
                "--problem",
                "sphere",
                "--n-var",
                "3",
                "--max-iter",
                "50",
            ]),
        )
        .unwrap();
        assert_eq!(cfg.mode, Mode::Single);
        assert_eq!(cfg.solver.pop_size, 50);
        assert_eq!(cfg.solver.max_iter, 50);
        assert_eq!(cfg.n_var, 3);
        assert_eq!(cfg.format, OutputFormat::Csv);
    }

    #[test]
    fn empty_file_lists_required_fields() {
        match parse_config(Some(""), &CliArgs::default()) {
            Err(CliError::MissingFields(f)) => assert_eq!(f, vec!["mode", "maxiter"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn flag_overrides_file() {
        let file = "mode = \"single\"\nproblem = \"sphere\"\nn_var = 2\nmaxiter = 10\npopSize = 30\n";
        let cfg = parse_config(Some(file), &flags(&["--pop-size", "100"])).unwrap();
        assert_eq!(cfg.solver.pop_size, 100);
        let cfg = parse_config(Some(file), &CliArgs::default()).unwrap();
        assert_eq!(cfg.solver.pop_size, 30);
    }

    #[test]
    fn unknown_key_is_named() {
        match parse_config(Some("mode = \"single\"\npopsize = 3\n"), &CliArgs::default()) {
            Err(CliError::UnknownKey(k)) => assert_eq!(k, "popsize"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn conflicting_modes() {
        let err = parse_config(Some("mode = \"multi\"\n"), &flags(&["--mode", "single"])).unwrap_err();
        assert!(matches!(err, CliError::ConflictingModes { .. }));
    }

    #[test]
    fn zero_iterations_rejected() {
        let err = parse_config(
            None,
            &flags(&[
                "--mode",
                "single",
                "--problem",
                "sphere",
                "--n-var",
                "2",
                "--max-iter",
                "0",
            ]),
        )
        .unwrap_err();
        assert!(matches!(err, CliError::Invalid(_)));
    }

    #[test]
    fn unknown_problem() {
        let err = parse_config(
            None,
            &flags(&[
                "--mode",
                "single",
                "--problem",
                "nope",
                "--n-var",
                "2",
                "--max-iter",
                "5",
            ]),
        )
        .unwrap_err();
        assert!(matches!(err, CliError::UnknownProblem { .. }));
    }

    #[test]
    fn energy_mode_takes_case_study_defaults() {
        let cfg = parse_config(None, &flags(&["--mode", "energy-case"])).unwrap();
        assert_eq!(cfg.solver.pop_size, 100);
        assert_eq!(cfg.solver.max_iter, 100);
        assert!(cfg.solver.adaptive_pop);
        assert_eq!((cfg.solver.min_pop(), cfg.solver.max_pop()), (50, 200));
        assert_eq!(cfg.energy.tolerance, 1e-3);
        assert_eq!(cfg.energy.min_total, 70.0);
    }

    #[test]
    fn energy_table_overrides() {
        let file = "mode = \"energy-case\"\n[energy]\nmin_total = 160\n[energy.model]\nintermittency_penalty = 0.25\n";
        let cfg = parse_config(Some(file), &CliArgs::default()).unwrap();
        assert_eq!(cfg.energy.min_total, 160.0);
        assert_eq!(cfg.energy.model.intermittency_penalty, 0.25);
    }

    #[test]
    fn explicit_bounds_must_match_n_var() {
        let file = "mode = \"single\"\nproblem = \"sphere\"\nn_var = 2\nmaxiter = 10\nlower = [-1.0]\nupper = [1.0]\n";
        assert!(matches!(
            parse_config(Some(file), &CliArgs::default()),
            Err(CliError::Invalid(_))
        ));
    }

    #[test]
    fn float_format_is_lossless() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 5e-324] {
            assert_eq!(fmt_float(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }
}
