//! Reproducible experiment runner.
//!
//! A run writes three files into its output directory:
//!
//! - `samples.csv`: `sample_id,seed,value,normalized,censored`, one row per
//!   sample in index order. Integer times are written as integers, floats
//!   with 17 significant digits.
//! - `summary.json`: experiment statistics.
//! - `manifest.json`: the configuration, seed rule, timing, summary and
//!   criterion outcomes. [`verify`] regenerates everything from it.

mod experiments;
mod output;
mod verify;

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Execution;
use crate::stats::check_grid;
use crate::walk::WalkKind;

pub use experiments::{evaluate, generate, Outcome};
pub use output::{render_csv, Row, Value};
pub use verify::{verify, VerifyReport};

pub const SAMPLES_FILE: &str = "samples.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Censoring above this fraction is flagged in the manifest.
pub const CENSORING_WARNING: f64 = 0.01;

/// Master seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_261_016;

pub const DEFAULT_T_GRID: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 3.0];

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const CRITERION_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const UNDERSIZED: i32 = 4;
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::IndexOutOfRange { .. } | Error::DimensionMismatch { .. } | Error::InvalidArgument(_) => {
            exit::USAGE
        }
        Error::Io { .. } | Error::MissingData(_) | Error::Malformed(_) => exit::IO,
        Error::InsufficientData { .. } => exit::UNDERSIZED,
        Error::HorizonExceeded { .. } | Error::Invariant(_) => exit::CRITERION_FAILED,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Coupling time of the heat-bath walks from `+` and `-`.
    Couple,
    /// Number of distinct points in the first `N^γ t` steps of the flip walk.
    Converge,
    /// First self-intersection and first backtrack of the flip walk.
    SelfReturn,
    /// Return time to the trajectory prefix, normalized by the estimated quantile.
    SetReturn,
    /// Hitting time of a random set of density `N^{-γ}`.
    RandomSet,
    /// Disjointness of two consecutive trajectory segments, forward and reflected.
    Reflect,
    /// Exact total-variation sweep and Ehrenfest excursion.
    Exact,
}

impl Experiment {
    pub fn id(self) -> &'static str {
        match self {
            Experiment::Couple => "couple",
            Experiment::Converge => "converge",
            Experiment::SelfReturn => "self-return",
            Experiment::SetReturn => "set-return",
            Experiment::RandomSet => "random-set",
            Experiment::Reflect => "reflect",
            Experiment::Exact => "exact",
        }
    }

    pub fn default_dimension(self) -> usize {
        match self {
            Experiment::Couple => 1024,
            Experiment::Converge => 10_000,
            Experiment::SelfReturn => 1000,
            Experiment::SetReturn => 20,
            Experiment::RandomSet => 10_000,
            Experiment::Reflect => 100,
            Experiment::Exact => 10,
        }
    }

    pub fn default_samples(self) -> u64 {
        match self {
            Experiment::Couple | Experiment::SetReturn => 2000,
            Experiment::Converge | Experiment::SelfReturn => 5000,
            Experiment::RandomSet => 200,
            Experiment::Reflect => 100_000,
            Experiment::Exact => 0,
        }
    }

    pub fn default_gamma(self) -> f64 {
        match self {
            Experiment::RandomSet => 0.6,
            _ => 0.5,
        }
    }

    /// Smallest sample count the experiment accepts.
    pub fn min_samples(self) -> u64 {
        match self {
            Experiment::Couple => 30,
            Experiment::SelfReturn => 10,
            Experiment::SetReturn => 20,
            Experiment::Converge | Experiment::RandomSet | Experiment::Reflect => 1,
            Experiment::Exact => 0,
        }
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n: usize,
    pub gamma: f64,
    /// Self-return horizon exponent: the search stops at `max(50 N, N^{1+δ})`.
    pub delta: f64,
    /// Samples; walks per environment for `random-set`, excursions for `exact`.
    pub samples: u64,
    /// Environments for `random-set`.
    pub envs: u64,
    pub t_grid: Vec<f64>,
    /// Time scale for `converge`.
    pub t: f64,
    /// Segment lengths for `reflect`.
    pub s: u64,
    pub u: u64,
    /// Last time of the `exact` sweep; defaults to `floor(10 N ln N)`.
    pub t_max: Option<u64>,
    /// Multiplies every default search horizon.
    pub horizon_multiplier: f64,
    pub kind: WalkKind,
    pub seed: u64,
    /// `0` uses every available core.
    pub workers: usize,
    pub out: PathBuf,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            n: experiment.default_dimension(),
            gamma: experiment.default_gamma(),
            delta: 0.5,
            samples: experiment.default_samples(),
            envs: 200,
            t_grid: DEFAULT_T_GRID.to_vec(),
            t: 1.0,
            s: 10,
            u: 20,
            t_max: None,
            horizon_multiplier: 1.0,
            kind: WalkKind::Flip,
            seed: DEFAULT_SEED,
            workers: 0,
            out: PathBuf::from("out").join(experiment.id()),
        }
    }

    pub fn execution(&self) -> Execution {
        Execution::from_workers(self.workers)
    }

    pub fn validate(&self) -> Result<()> {
        let e = self.experiment;
        let min_n = match e {
            Experiment::Couple | Experiment::Exact => 2,
            _ => 1,
        };
        if self.n < min_n {
            return Err(Error::invalid(format!("{} needs N >= {min_n}", e.id())));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::invalid(format!("gamma must lie in (0,1), got {}", self.gamma)));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::invalid("delta must be positive"));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::invalid("t must be positive"));
        }
        if !(self.horizon_multiplier > 0.0 && self.horizon_multiplier.is_finite()) {
            return Err(Error::invalid("horizon multiplier must be positive"));
        }
        check_grid(&self.t_grid)?;
        if self.t_grid[0] <= 0.0 {
            return Err(Error::invalid("t-grid values must be positive"));
        }
        if e == Experiment::RandomSet && self.envs < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: self.envs as usize,
            });
        }
        if e == Experiment::Reflect && (self.s == 0 || self.u == 0) {
            return Err(Error::invalid("reflect needs s >= 1 and u >= 1"));
        }
        if self.samples < e.min_samples() {
            return Err(Error::InsufficientData {
                needed: e.min_samples() as usize,
                got: self.samples as usize,
            });
        }
        Ok(())
    }
}

/// One acceptance check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub observed: f64,
    pub requirement: String,
    pub passed: bool,
}

impl Criterion {
    pub fn new(name: &str, observed: f64, requirement: impl Into<String>, passed: bool) -> Self {
        Self {
            name: name.to_string(),
            observed,
            requirement: requirement.into(),
            passed,
        }
    }

    pub fn at_most(name: &str, observed: f64, bound: f64) -> Self {
        Self::new(name, observed, format!("<= {bound}"), observed <= bound)
    }

    pub fn at_least(name: &str, observed: f64, bound: f64) -> Self {
        Self::new(name, observed, format!(">= {bound}"), observed >= bound)
    }

    pub fn within(name: &str, observed: f64, lo: f64, hi: f64) -> Self {
        Self::new(
            name,
            observed,
            format!("in [{lo}, {hi}]"),
            (lo..=hi).contains(&observed),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub config: ExperimentConfig,
    pub seed_rule: String,
    pub started_unix: u64,
    pub wall_clock_seconds: f64,
    pub samples_file: String,
    pub summary_file: String,
    pub summary: serde_json::Value,
    pub criteria: Vec<Criterion>,
    pub passed: bool,
    pub warnings: Vec<String>,
}

pub const SEED_RULE: &str = "walk sample i uses seed derive_seed(master, experiment id, i); \
reflect uses lanes reflect-forward and reflect-backward; environment e uses derive_seed(master, \"env\", e); \
derive_seed mixes the FNV-1a hash of the lane, the master seed and i with SplitMix64";

pub fn censoring_warnings(rows: &[Row]) -> Vec<String> {
    if rows.is_empty() {
        return Vec::new();
    }
    let censored = rows.iter().filter(|r| r.censored).count();
    let rate = censored as f64 / rows.len() as f64;
    if rate > CENSORING_WARNING {
        vec![format!(
            "{censored} of {} samples ({:.2}%) were censored at the horizon",
            rows.len(),
            100.0 * rate
        )]
    } else {
        Vec::new()
    }
}

/// Runs the experiment and writes its files into `config.out`.
pub fn run(config: &ExperimentConfig) -> Result<RunManifest> {
    config.validate()?;
    let started_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let clock = Instant::now();
    let outcome = generate(config)?;
    let (summary, criteria) = evaluate(config, &outcome)?;
    let wall_clock_seconds = clock.elapsed().as_secs_f64();

    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        seed_rule: SEED_RULE.to_string(),
        started_unix,
        wall_clock_seconds,
        samples_file: SAMPLES_FILE.to_string(),
        summary_file: SUMMARY_FILE.to_string(),
        passed: criteria.iter().all(|c| c.passed),
        warnings: censoring_warnings(&outcome.rows),
        summary,
        criteria,
    };
    write_outputs(&config.out, &outcome.rows, &manifest)?;
    Ok(manifest)
}

fn write_outputs(dir: &Path, rows: &[Row], manifest: &RunManifest) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    output::write_file(&dir.join(SAMPLES_FILE), &render_csv(rows)?)?;
    output::write_json(&dir.join(SUMMARY_FILE), &manifest.summary)?;
    output::write_json(&dir.join(MANIFEST_FILE), manifest)
}

/// Reads a manifest written by [`run`].
pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = output::read_file(path)?;
    serde_json::from_slice(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}
