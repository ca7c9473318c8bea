//! Experiment orchestration: configuration, seeded parallel Monte Carlo,
//! and CSV/SVG report emission.
//!
//! Trials are the unit of parallel work. Trial t draws its matrix from a
//! stream derived from (master seed, t), and the per-trial results are
//! folded in trial order, so reports are byte-identical no matter how many
//! worker threads run them.

pub mod bias;
pub mod concentration;
pub mod config;
pub mod crude;
pub mod density;
pub mod edges;
pub mod fit;
pub mod locallaw;
pub mod perturb;
pub mod report;
pub mod sample;
pub mod svg;
pub mod variance;

use std::path::PathBuf;

use rayon::prelude::*;

use crate::error::Result;

pub use bias::{run_bias, BiasOutcome, BiasPoint};
pub use concentration::{run_concentration, ConcentrationOutcome, TailPoint};
pub use config::{ExperimentConfig, ExperimentKind};
pub use crude::{run_crude_bound, CrudeOutcome};
pub use density::{emit_density, DensityOutcome};
pub use edges::run_edges;
pub use locallaw::{run_locallaw, LocalLawOutcome};
pub use perturb::{run_perturb, PerturbOutcome};
pub use report::Report;
pub use sample::run_sample;
pub use variance::{run_variance, VarianceOutcome, VariancePoint};

/// Map trial indices through `f` on the current rayon pool, collecting
/// results in trial order.
pub(crate) fn run_trials<T, F>(trials: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    (0..trials as u64)
        .into_par_iter()
        .map(f)
        .collect::<Result<Vec<T>>>()
}

/// Files written by [`execute`] plus the summary lines for the terminal.
#[derive(Debug)]
pub struct Execution {
    pub csv_path: PathBuf,
    pub extra_paths: Vec<PathBuf>,
    pub summary: Vec<(String, String)>,
}

/// Run the configured experiment and write its report(s) under
/// `cfg.out_dir`.
pub fn execute(cfg: &ExperimentConfig) -> Result<Execution> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    let csv_path = cfg.out_dir.join(format!("{}.csv", cfg.kind.name()));
    let mut extra_paths = Vec::new();

    let report = match cfg.kind {
        ExperimentKind::Density => {
            let out = emit_density(cfg)?;
            if let Some(svg_text) = &out.svg {
                let svg_path = cfg.out_dir.join("density.svg");
                std::fs::write(&svg_path, svg_text)?;
                extra_paths.push(svg_path);
            }
            out.report
        }
        ExperimentKind::Edges => run_edges(cfg)?,
        ExperimentKind::Sample => run_sample(cfg)?,
        ExperimentKind::LocalLaw => run_locallaw(cfg)?.report,
        ExperimentKind::CrudeBound => run_crude_bound(cfg)?.report,
        ExperimentKind::Variance => run_variance(cfg)?.report,
        ExperimentKind::Concentration => run_concentration(cfg)?.report,
        ExperimentKind::Bias => run_bias(cfg)?.report,
        ExperimentKind::PerturbationCheck => run_perturb(cfg)?.report,
    };
    report.write(&csv_path)?;

    Ok(Execution {
        csv_path,
        extra_paths,
        summary: report.summary,
    })
}
