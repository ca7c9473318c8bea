//! Concentration-tail experiment: empirical P(|s_n(z) - mean| >= eps)
//! against the shape of the exponential bound.

use num_complex::Complex64;

use crate::eigen;
use crate::error::{Error, Result};
use crate::freeconv::StieltjesQuery;
use crate::model::assemble;
use crate::stats::empirical_stieltjes;
use crate::stream::{substream_seed, trial_stream, Lane};

use super::config::ExperimentConfig;
use super::report::{fmt, Report};
use super::run_trials;
use super::variance::MC_ETA_FLOOR;

#[derive(Debug, Clone, Copy)]
pub struct TailPoint {
    pub n: usize,
    pub epsilon: f64,
    pub tail: f64,
    /// n eta eps min(1/ln n, n eta^2 eps): the exponent's argument up to
    /// constants. Reported for side-by-side reading, never asserted.
    pub bound_shape: f64,
}

#[derive(Debug)]
pub struct ConcentrationOutcome {
    pub report: Report,
    pub points: Vec<TailPoint>,
    /// Tail non-increasing in epsilon for every n.
    pub monotone_in_epsilon: bool,
}

pub fn run_concentration(cfg: &ExperimentConfig) -> Result<ConcentrationOutcome> {
    if cfg.epsilons.len() < 3 {
        return Err(Error::Config(
            "concentration needs an epsilon grid of at least 3 points".into(),
        ));
    }
    if cfg.eta < MC_ETA_FLOOR {
        return Err(Error::EtaTooSmall {
            eta: cfg.eta,
            floor: MC_ETA_FLOOR,
        });
    }
    if cfg.trials < 2 {
        return Err(Error::Config("concentration needs at least 2 trials".into()));
    }
    let x = cfg.resolve_x()?;
    let eta = cfg.eta;
    let q = StieltjesQuery::new(x, eta)?;

    let mut report = Report::new(
        cfg.hash(),
        &["n", "eta", "x", "epsilon", "tail", "bound_shape"],
    );
    let mut points = Vec::new();
    let mut monotone_in_epsilon = true;

    for &n in &cfg.n_list {
        let model = cfg.model_with_n(n)?;
        let seed_n = substream_seed(model.seed, n as u64);
        let values: Vec<Complex64> = run_trials(cfg.trials, |t| {
            let mut rng = trial_stream(seed_n, t, Lane::Matrix);
            let w = assemble(&model, &mut rng)?;
            let sample = eigen::eigenvalues(&w)?;
            Ok(empirical_stieltjes(&sample, q).value)
        })?;
        let mean = super::fit::complex_mean(&values);
        let deviations: Vec<f64> = values.iter().map(|v| (v - mean).norm()).collect();

        let nf = n as f64;
        let mut previous_tail = f64::INFINITY;
        for &eps in &cfg.epsilons {
            let hits = deviations.iter().filter(|&&d| d >= eps).count();
            let tail = hits as f64 / cfg.trials as f64;
            let bound_shape = nf * eta * eps * (1.0 / nf.ln()).min(nf * eta * eta * eps);
            if tail > previous_tail {
                monotone_in_epsilon = false;
            }
            previous_tail = tail;
            points.push(TailPoint {
                n,
                epsilon: eps,
                tail,
                bound_shape,
            });
            report.push_row(vec![
                n.to_string(),
                fmt(eta),
                fmt(x),
                fmt(eps),
                fmt(tail),
                fmt(bound_shape),
            ]);
        }
    }

    report.push_summary(
        "tail_monotone_in_epsilon",
        monotone_in_epsilon.to_string(),
    );

    Ok(ConcentrationOutcome {
        report,
        points,
        monotone_in_epsilon,
    })
}
