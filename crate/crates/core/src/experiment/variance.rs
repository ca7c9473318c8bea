//! Variance-scaling experiment for the empirical Stieltjes transform.

use num_complex::Complex64;

use crate::eigen;
use crate::error::{Error, Result};
use crate::freeconv::StieltjesQuery;
use crate::model::assemble;
use crate::stats::empirical_stieltjes;
use crate::stream::{substream_seed, trial_stream, Lane};

use super::config::ExperimentConfig;
use super::fit;
use super::report::{fmt, Report};
use super::run_trials;

/// Smallest eta the Monte Carlo experiments accept; far below this the
/// desk-scale trials are pure noise.
pub const MC_ETA_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub struct VariancePoint {
    pub n: usize,
    pub eta: f64,
    pub x: f64,
    /// Var(Re s_n) + Var(Im s_n) over the trials.
    pub var: f64,
    /// var * n^2 eta^3, the combination the fluctuation bound controls.
    pub var_scaled: f64,
    /// Standard error of the variance estimate.
    pub stderr: f64,
}

#[derive(Debug)]
pub struct VarianceOutcome {
    pub report: Report,
    pub points: Vec<VariancePoint>,
    /// Per eta: slope of ln var against ln n.
    pub slope_vs_n: Vec<(f64, f64)>,
    /// Per n: slope of ln var against ln eta.
    pub slope_vs_eta: Vec<(usize, f64)>,
}

/// For each (n, eta) in the grid, estimate Var s_n(x + i eta) over M
/// trials. One decomposition per trial serves every eta.
pub fn run_variance(cfg: &ExperimentConfig) -> Result<VarianceOutcome> {
    if cfg.trials < 2 {
        return Err(Error::Config("variance needs at least 2 trials".into()));
    }
    for &eta in &cfg.eta_list {
        if eta < MC_ETA_FLOOR {
            return Err(Error::EtaTooSmall {
                eta,
                floor: MC_ETA_FLOOR,
            });
        }
    }
    let x = cfg.resolve_x()?;

    let mut report = Report::new(
        cfg.hash(),
        &["n", "eta", "x", "var", "var_scaled", "stderr"],
    );
    let mut points = Vec::new();

    for &n in &cfg.n_list {
        let model = cfg.model_with_n(n)?;
        let seed_n = substream_seed(model.seed, n as u64);
        let per_trial: Vec<Vec<Complex64>> = run_trials(cfg.trials, |t| {
            let mut rng = trial_stream(seed_n, t, Lane::Matrix);
            let w = assemble(&model, &mut rng)?;
            let sample = eigen::eigenvalues(&w)?;
            cfg.eta_list
                .iter()
                .map(|&eta| {
                    StieltjesQuery::new(x, eta).map(|q| empirical_stieltjes(&sample, q).value)
                })
                .collect()
        })?;

        for (e_idx, &eta) in cfg.eta_list.iter().enumerate() {
            let re: Vec<f64> = per_trial.iter().map(|v| v[e_idx].re).collect();
            let im: Vec<f64> = per_trial.iter().map(|v| v[e_idx].im).collect();
            let var = fit::sample_variance(&re) + fit::sample_variance(&im);
            let var_scaled = var * (n as f64).powi(2) * eta.powi(3);
            // Near-Gaussian approximation for the spread of a sample
            // variance: sd ~ var sqrt(2 / (M - 1)).
            let stderr = var * (2.0 / (cfg.trials as f64 - 1.0)).sqrt();
            points.push(VariancePoint {
                n,
                eta,
                x,
                var,
                var_scaled,
                stderr,
            });
            report.push_row(vec![
                n.to_string(),
                fmt(eta),
                fmt(x),
                fmt(var),
                fmt(var_scaled),
                fmt(stderr),
            ]);
        }
    }

    let mut slope_vs_n = Vec::new();
    for &eta in &cfg.eta_list {
        let pts: Vec<(f64, f64)> = points
            .iter()
            .filter(|p| p.eta == eta && p.var > 0.0)
            .map(|p| ((p.n as f64).ln(), p.var.ln()))
            .collect();
        if pts.len() >= 2 {
            let s = fit::slope(&pts);
            report.push_summary(format!("slope_var_vs_n_eta{eta}"), fmt(s));
            slope_vs_n.push((eta, s));
        }
    }
    let mut slope_vs_eta = Vec::new();
    for &n in &cfg.n_list {
        let pts: Vec<(f64, f64)> = points
            .iter()
            .filter(|p| p.n == n && p.var > 0.0)
            .map(|p| (p.eta.ln(), p.var.ln()))
            .collect();
        if pts.len() >= 2 {
            let s = fit::slope(&pts);
            report.push_summary(format!("slope_var_vs_eta_n{n}"), fmt(s));
            slope_vs_eta.push((n, s));
        }
    }

    Ok(VarianceOutcome {
        report,
        points,
        slope_vs_n,
        slope_vs_eta,
    })
}
