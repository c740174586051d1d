use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cube_times::harness::{self, exit, Experiment, ExperimentConfig};
use cube_times::WalkKind;

const FILES_HELP: &str = "\
Output files (in --out):
  samples.csv    header sample_id,seed,value,normalized,censored; one row per sample in
                 index order; integer times as integers, reals with 17 significant digits
  summary.json   experiment statistics
  manifest.json  configuration, seed rule, timing, summary and criterion outcomes

Exit codes: 0 all criteria pass, 1 a criterion failed, 2 usage error,
3 I/O error or missing data, 4 sample below the minimum size.";

#[derive(Parser)]
#[command(name = "cube-times", version, about = "Stopping-time experiments for random walks on the hypercube", after_help = FILES_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coupling time of the heat-bath walks started from all-plus and all-minus
    Couple(RunArgs),
    /// Distinct points among the first N^gamma t steps of the flip walk
    Converge(RunArgs),
    /// First self-intersection time and first backtrack of the flip walk
    SelfReturn(RunArgs),
    /// Return time to the trajectory prefix, normalized by the estimated quantile
    SetReturn(RunArgs),
    /// Hitting time of a random set of density N^-gamma
    RandomSet(RunArgs),
    /// Disjointness of consecutive trajectory segments and of their reflection
    Reflect(RunArgs),
    /// Exact total-variation sweep and Ehrenfest excursion probability
    Exact(RunArgs),
    /// Regenerate a finished run from its manifest and re-check every criterion
    Verify {
        manifest: PathBuf,
    },
}

#[derive(Args)]
#[command(after_help = FILES_HELP)]
struct RunArgs {
    /// Dimension N
    #[arg(long)]
    n: Option<usize>,
    /// Exponent gamma in (0,1)
    #[arg(long)]
    gamma: Option<f64>,
    /// Self-return horizon exponent: searches stop at max(50 N, N^(1+delta))
    #[arg(long)]
    delta: Option<f64>,
    /// Samples (walks per environment for random-set, excursions for exact)
    #[arg(long)]
    samples: Option<u64>,
    /// Environments for random-set
    #[arg(long)]
    envs: Option<u64>,
    /// Comma-separated, strictly increasing survival grid
    #[arg(long, value_delimiter = ',')]
    t_grid: Option<Vec<f64>>,
    /// Time scale for converge
    #[arg(long)]
    t: Option<f64>,
    /// First segment length for reflect
    #[arg(long)]
    s: Option<u64>,
    /// Second segment length for reflect
    #[arg(long)]
    u: Option<u64>,
    /// Last time of the exact sweep (default floor(10 N ln N))
    #[arg(long)]
    t_max: Option<u64>,
    /// Factor applied to every default search horizon
    #[arg(long)]
    horizon_multiplier: Option<f64>,
    /// Walk for set-return: flip or heat-bath
    #[arg(long, value_parser = parse_kind)]
    kind: Option<WalkKind>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<WalkKind, String> {
    match s {
        "flip" => Ok(WalkKind::Flip),
        "heat-bath" => Ok(WalkKind::HeatBath),
        _ => Err(format!("unknown walk {s:?}; expected flip or heat-bath")),
    }
}

impl RunArgs {
    fn into_config(self, experiment: Experiment) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(experiment);
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = self.$field { c.$field = v; })* };
        }
        set!(n, gamma, delta, samples, envs, t_grid, t, s, u, horizon_multiplier, kind, seed, workers, out);
        c.t_max = self.t_max;
        c
    }
}

fn report(criteria: &[harness::Criterion]) {
    for c in criteria {
        let status = if c.passed { "PASS" } else { "FAIL" };
        eprintln!("{status} {}: {} (required {})", c.name, c.observed, c.requirement);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify { manifest } => match harness::verify(&manifest) {
            Ok(r) => {
                report(&r.criteria);
                match serde_json::to_string_pretty(&r) {
                    Ok(text) => println!("{text}"),
                    Err(e) => eprintln!("error: {e}"),
                }
                if r.passed { exit::PASS } else { exit::CRITERION_FAILED }
            }
            Err(e) => {
                eprintln!("error: {e}");
                harness::exit_code(&e)
            }
        },
        command => {
            let (experiment, args) = match command {
                Command::Couple(a) => (Experiment::Couple, a),
                Command::Converge(a) => (Experiment::Converge, a),
                Command::SelfReturn(a) => (Experiment::SelfReturn, a),
                Command::SetReturn(a) => (Experiment::SetReturn, a),
                Command::RandomSet(a) => (Experiment::RandomSet, a),
                Command::Reflect(a) => (Experiment::Reflect, a),
                Command::Exact(a) => (Experiment::Exact, a),
                Command::Verify { .. } => unreachable!(),
            };
            let config = args.into_config(experiment);
            match harness::run(&config) {
                Ok(m) => {
                    report(&m.criteria);
                    for w in &m.warnings {
                        eprintln!("warning: {w}");
                    }
                    println!("{}", config.out.join(harness::MANIFEST_FILE).display());
                    if m.passed { exit::PASS } else { exit::CRITERION_FAILED }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    harness::exit_code(&e)
                }
            }
        }
    };
    ExitCode::from(code as u8)
}
