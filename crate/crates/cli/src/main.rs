//! `mons-bench`: single-pass online learning experiments on LIBSVM data.
//!
//! Exit status: 0 on success, 1 on runtime or I/O failure, 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mons_core::baselines::BaselineConfig;
use mons_core::dataio::{load_libsvm, Dataset};
use mons_core::harness::{
    aggregate, emit_regret, emit_results, regret_report, run_seeds, seed_range,
    synthetic::{generate, SyntheticSpec},
    OutputPaths,
};
use mons_core::mons::MonsConfig;
use mons_core::{Algorithm, Error, LearnerConfig};

#[derive(Debug, Parser)]
#[command(
    name = "mons-bench",
    version,
    about = "Online Newton step benchmark runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one algorithm over several shuffled passes of a dataset.
    Run(DataArgs),
    /// Run several algorithms on the same seeds and print a comparison table.
    Compare(DataArgs),
    /// Measure regret of the Newton learner on a synthetic separable stream.
    Regret(RegretArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Libsvm,
}

#[derive(Debug, Args)]
struct Hyper {
    /// Regularizer and curvature floor (> 0).
    #[arg(long, default_value_t = mons_core::mons::DEFAULT_LAMBDA)]
    lambda: f64,
    /// Step numerator: eta_t = eta_scale / sqrt(t).
    #[arg(long = "eta-scale", default_value_t = mons_core::mons::DEFAULT_ETA_SCALE)]
    eta_scale: f64,
    /// PA-I / SCW aggressiveness.
    #[arg(long = "C", default_value_t = mons_core::baselines::DEFAULT_C)]
    c: f64,
    /// AROW regularizer.
    #[arg(long = "r", default_value_t = mons_core::baselines::DEFAULT_R)]
    r: f64,
    /// CW / SCW confidence level in (0.5, 1).
    #[arg(long = "eta-conf", default_value_t = mons_core::baselines::DEFAULT_ETA_CONF)]
    eta_conf: f64,
}

impl Hyper {
    fn learner_config(&self) -> Result<LearnerConfig, Error> {
        let cfg = LearnerConfig {
            mons: MonsConfig {
                lambda: self.lambda,
                eta_scale: self.eta_scale,
            },
            baseline: BaselineConfig {
                c: self.c,
                r: self.r,
                eta_conf: self.eta_conf,
            },
        };
        cfg.mons.validate()?;
        cfg.baseline.validate()?;
        Ok(cfg)
    }

    fn describe(&self) -> String {
        format!(
            "lambda={} eta_scale={} C={} r={} eta_conf={}",
            self.lambda, self.eta_scale, self.c, self.r, self.eta_conf
        )
    }
}

#[derive(Debug, Args)]
struct DataArgs {
    /// LIBSVM file (".gz" is decompressed).
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Libsvm)]
    format: Format,
    /// Feature count override (default: largest index in the file).
    #[arg(long)]
    dim: Option<usize>,
    /// Scale every feature into [-1, 1] by its largest magnitude.
    #[arg(long)]
    scale: bool,
    /// Comma-separated: ons, perceptron, pa1, cw, arow, scw1, scw2.
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    algo: Vec<Algorithm>,
    /// Shuffled passes per algorithm; pass i uses seed + i.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    hyper: Hyper,
    /// Per-run results CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cumulative curve CSV.
    #[arg(long)]
    curves: Option<PathBuf>,
    /// Worker threads (default: logical cores).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

#[derive(Debug, Args)]
struct RegretArgs {
    /// Stream length T.
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(10..))]
    horizon: u64,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(2..))]
    classes: u64,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    features: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    hyper: Hyper,
    /// Regret CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!(
                "error[usage]: {}",
                one_line(first.trim_start_matches("error: "))
            );
            return ExitCode::from(2);
        }
    };

    let result = match cli.command {
        Command::Run(args) => run_data(args, false),
        Command::Compare(args) => run_data(args, true),
        Command::Regret(args) => run_regret(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error[usage]: {}", one_line(&msg));
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            let kind = match e {
                Error::Io { .. } => "io",
                Error::Parse { .. } => "parse",
                _ => "runtime",
            };
            eprintln!("error[{kind}]: {}", one_line(&e.to_string()));
            ExitCode::from(1)
        }
    }
}

fn run_data(args: DataArgs, compare: bool) -> Result<(), Failure> {
    let cfg = args
        .hyper
        .learner_config()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let algos = if args.algo.is_empty() {
        if compare {
            vec![
                Algorithm::Ons,
                Algorithm::Cw,
                Algorithm::Arow,
                Algorithm::Scw1,
                Algorithm::Scw2,
            ]
        } else {
            vec![Algorithm::Ons]
        }
    } else {
        args.algo.clone()
    };
    if !compare && algos.len() != 1 {
        return Err(Failure::Usage(
            "run takes exactly one --algo; use compare for several".into(),
        ));
    }
    let jobs = args.jobs.map_or_else(default_jobs, |j| j as usize);
    let Format::Libsvm = args.format;

    println!(
        "# config: command={} data={} format=libsvm dim={} scale={} algo={} runs={} seed={} {} jobs={}",
        if compare { "compare" } else { "run" },
        args.data.display(),
        args.dim.map_or_else(|| "auto".to_string(), |d| d.to_string()),
        args.scale,
        algos.iter().map(|a| a.name()).collect::<Vec<_>>().join(","),
        args.runs,
        args.seed,
        args.hyper.describe(),
        jobs,
    );

    let mut dataset: Dataset = load_libsvm(&args.data, args.dim)?;
    if args.scale {
        dataset.scale_unit_range()?;
    }
    println!(
        "# dataset: {} n={} d={} m={}",
        dataset.name(),
        dataset.n(),
        dataset.d(),
        dataset.m()
    );

    let seeds = seed_range(args.seed, args.runs as usize);
    let mut records = Vec::new();
    let mut aggregates = Vec::new();
    for algo in algos {
        let recs = run_seeds(algo, &cfg, &dataset, &seeds, jobs)?;
        aggregates.push(aggregate(&recs)?);
        records.extend(recs);
    }
    let paths = OutputPaths {
        table: None,
        results_csv: args.out.clone(),
        curves_csv: args.curves.clone(),
    };
    let table = emit_results(&aggregates, &records, &paths)?;
    print!("{table}");
    Ok(())
}

fn run_regret(args: RegretArgs) -> Result<(), Failure> {
    let cfg = args
        .hyper
        .learner_config()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    println!(
        "# config: command=regret horizon={} classes={} features={} seed={} {}",
        args.horizon,
        args.classes,
        args.features,
        args.seed,
        args.hyper.describe()
    );
    let t = args.horizon as usize;
    let spec = SyntheticSpec::separable(
        args.classes as usize,
        args.features as usize,
        t,
        1.0,
        args.seed,
    );
    let (stream, _) = generate(&spec)?;
    let horizons: Vec<usize> = (1..=10).map(|k| (t * k).div_ceil(10)).collect();
    let reports = regret_report(&cfg.mons, &stream, &horizons)?;

    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>14} {:>10} {:>8}",
        "T", "online_loss", "comparator", "regret", "bound_value", "R/sqrt(T)", "valid"
    );
    for r in &reports {
        println!(
            "{:>6} {:>12.3} {:>12.3} {:>12.3} {:>14.3} {:>10.4} {:>8}",
            r.horizon,
            r.online_loss,
            r.comparator_loss,
            r.regret,
            r.bound_value,
            r.per_sqrt_round(),
            r.comparator_valid
        );
    }
    if let Some(path) = &args.out {
        emit_regret(&reports, path)?;
    }
    if let Some(bad) = reports.iter().find(|r| !r.comparator_valid) {
        return Err(Failure::Runtime(Error::Aggregate(format!(
            "comparator did not converge at T={}",
            bad.horizon
        ))));
    }
    Ok(())
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
