use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};
use extsource_core::experiment::{execute, Execution, ExperimentConfig, ExperimentKind};

/// Spectral density and seeded Monte Carlo checks for random Hermitian
/// matrices with a diagonal +-a external source.
#[derive(Parser)]
#[command(name = "extsource", version, about)]
struct Cli {
    /// Config file: one `key = value` per line, `#` comments allowed,
    /// unknown keys rejected.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads; defaults to all cores. Reports are byte-identical
    /// for any value.
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,

    /// Output directory (default `out/`).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Also render an SVG overlay where the experiment supports one.
    #[arg(long, global = true)]
    svg: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export the limiting density rho on a grid
    Density,
    /// Locate the support edges z2 < z1
    Edges,
    /// Dump one sampled matrix as upper-triangle `i,j,re,im` rows
    Sample,
    /// Eigenvalue counts on bulk intervals vs the limiting mass
    Locallaw,
    /// Count bound N_I/(n|I|) on shrinking random bulk intervals
    Crude,
    /// Variance scaling of the empirical Stieltjes transform
    Variance,
    /// Concentration tails of the empirical Stieltjes transform
    Concentration,
    /// Bias of E s_n(z) against the limiting transform
    Bias,
    /// First-order eigenvalue derivative identities vs finite differences
    Perturb,
}

impl Command {
    fn kind(&self) -> ExperimentKind {
        match self {
            Command::Density => ExperimentKind::Density,
            Command::Edges => ExperimentKind::Edges,
            Command::Sample => ExperimentKind::Sample,
            Command::Locallaw => ExperimentKind::LocalLaw,
            Command::Crude => ExperimentKind::CrudeBound,
            Command::Variance => ExperimentKind::Variance,
            Command::Concentration => ExperimentKind::Concentration,
            Command::Bias => ExperimentKind::Bias,
            Command::Perturb => ExperimentKind::PerturbationCheck,
        }
    }
}

fn main() -> std::process::ExitCode {
    match run() {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::FAILURE
        }
    }
}

fn run() -> Result<()> {
    let cli = Cli::parse();

    let mut cfg = ExperimentConfig::new(cli.command.kind());
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    if cli.svg {
        cfg.svg = true;
    }
    if let Some(threads) = cli.threads {
        cfg.threads = Some(threads);
    }

    let execution: Execution = match cfg.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()?
            .install(|| execute(&cfg)),
        None => execute(&cfg),
    }?;

    println!("wrote {}", execution.csv_path.display());
    for path in &execution.extra_paths {
        println!("wrote {}", path.display());
    }
    for (key, value) in &execution.summary {
        println!("{key} = {value}");
    }
    Ok(())
}
