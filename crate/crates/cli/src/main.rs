use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use excursion_core::experiment::{run, ExperimentConfig, ExperimentKind, RunOptions, Workers};
use excursion_core::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "excursion", version, about = "Monte Carlo experiments on excursion sets of planar Gaussian fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample fields and write EXLB1 grids with their censuses.
    Synth(Common),
    /// Count components and critical points of a stored EXLB1 grid.
    Census {
        #[command(flatten)]
        common: Common,
        /// EXLB1 grid to analyse; overrides `input` in the config.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Estimate the mean component density across a level grid.
    Density(Common),
    /// Check the level integral identity on a window.
    Identity(Common),
    /// Fit the variance growth exponent over a ladder of window sizes.
    Scaling(Common),
    /// Compare component counts at two nearby levels on the same samples.
    Paired(Common),
    /// Measure the sup error of truncated random plane wave expansions.
    RpwTrunc(Common),
    /// Evaluate the Gaussian scaling KL divergence and total variation bound.
    KlBound(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory; overrides the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(kind: ExperimentKind, common: &Common) -> Result<ExperimentConfig, Error> {
    let config = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::new(kind),
    };
    if config.kind != kind {
        return Err(Error::Config(format!(
            "config describes a `{}` experiment but the `{}` subcommand was used",
            config.kind.name(),
            kind.name()
        )));
    }
    Ok(config)
}

fn execute(cli: Cli) -> Result<(), Error> {
    let (kind, common, input) = match cli.command {
        Command::Synth(c) => (ExperimentKind::Synth, c, None),
        Command::Census { common, input } => (ExperimentKind::Census, common, input),
        Command::Density(c) => (ExperimentKind::Density, c, None),
        Command::Identity(c) => (ExperimentKind::Identity, c, None),
        Command::Scaling(c) => (ExperimentKind::Scaling, c, None),
        Command::Paired(c) => (ExperimentKind::Paired, c, None),
        Command::RpwTrunc(c) => (ExperimentKind::RpwTrunc, c, None),
        Command::KlBound(c) => (ExperimentKind::KlBound, c, None),
    };
    let mut config = load(kind, &common)?;
    if let Some(input) = input {
        config.input = Some(input.display().to_string());
    }
    let options = RunOptions {
        workers: common.workers.map(Workers::new).unwrap_or_default(),
        seed: common.seed,
        out: common.out,
    };
    let manifest = run(&config, &options)?;
    for entry in &manifest.outputs {
        println!("{}  {}", entry.sha256, entry.path);
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { EXIT_CONFIG } else { EXIT_RUNTIME })
        }
    }
}
