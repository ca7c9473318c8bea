//! Crude-bound experiment: N_I / (n |I|) over random bulk intervals whose
//! width shrinks like (ln n)^2 / n, across a list of dimensions.

use rand::Rng;

use crate::eigen;
use crate::error::{Error, Result};
use crate::model::assemble;
use crate::stats::count_in_interval;
use crate::stream::{substream_seed, trial_stream, Lane};

use super::config::ExperimentConfig;
use super::report::{fmt, Report};
use super::run_trials;

#[derive(Debug)]
pub struct CrudeOutcome {
    pub report: Report,
    /// (n, max over trials and intervals of N_I / (n |I|)).
    pub max_ratios: Vec<(usize, f64)>,
    /// Least-squares slope of max ratio against ln n.
    pub slope: f64,
}

/// For each n in the configured list, sample M matrices and
/// `intervals_per_trial` random bulk intervals of width
/// `width_factor (ln n)^2 / n` each, and record the count ratios.
pub fn run_crude_bound(cfg: &ExperimentConfig) -> Result<CrudeOutcome> {
    let edges = cfg.edges()?;
    if cfg.n_list.is_empty() {
        return Err(Error::Config("n_list must be non-empty".into()));
    }

    let mut report = Report::new(
        cfg.hash(),
        &["n", "trial", "interval_lo", "interval_hi", "count", "ratio"],
    );
    let mut max_ratios = Vec::new();

    for &n in &cfg.n_list {
        let model = cfg.model_with_n(n)?;
        let width = cfg.width_factor * (n as f64).ln().powi(2) / n as f64;

        // Admissible center ranges inside the band(s).
        let pos_lo = edges.z2 + cfg.margin + 0.5 * width;
        let pos_hi = edges.z1 - cfg.margin - 0.5 * width;
        let single_band = edges.z2 == 0.0;
        let (center_lo, center_hi) = if single_band {
            (-edges.z1 + cfg.margin + 0.5 * width, edges.z1 - cfg.margin - 0.5 * width)
        } else {
            (pos_lo, pos_hi)
        };
        if center_hi <= center_lo {
            return Err(Error::Config(format!(
                "width {width} does not fit the bulk at n = {n}"
            )));
        }

        let seed_n = substream_seed(model.seed, n as u64);
        let per_trial: Vec<Vec<(f64, f64, usize)>> = run_trials(cfg.trials, |t| {
            let mut rng = trial_stream(seed_n, t, Lane::Matrix);
            let w = assemble(&model, &mut rng)?;
            let sample = eigen::eigenvalues(&w)?;
            let mut aux = trial_stream(seed_n, t, Lane::Aux);
            let mut rows = Vec::with_capacity(cfg.intervals_per_trial);
            for _ in 0..cfg.intervals_per_trial {
                let mut c = aux.gen_range(center_lo..center_hi);
                if !single_band && aux.gen::<bool>() {
                    c = -c;
                }
                let (lo, hi) = (c - 0.5 * width, c + 0.5 * width);
                let count = count_in_interval(&sample, lo, hi)?.count;
                rows.push((lo, hi, count));
            }
            Ok(rows)
        })?;

        let mut max_ratio = 0.0f64;
        for (t, rows) in per_trial.iter().enumerate() {
            for &(lo, hi, count) in rows {
                let ratio = count as f64 / (n as f64 * width);
                max_ratio = max_ratio.max(ratio);
                report.push_row(vec![
                    n.to_string(),
                    t.to_string(),
                    fmt(lo),
                    fmt(hi),
                    count.to_string(),
                    fmt(ratio),
                ]);
            }
        }
        report.push_summary(format!("max_ratio_n{n}"), fmt(max_ratio));
        max_ratios.push((n, max_ratio));
    }

    let points: Vec<(f64, f64)> = max_ratios
        .iter()
        .map(|&(n, r)| ((n as f64).ln(), r))
        .collect();
    let slope = if points.len() >= 2 {
        super::fit::slope(&points)
    } else {
        0.0
    };
    report.push_summary("max_ratio_slope_vs_ln_n", fmt(slope));

    Ok(CrudeOutcome {
        report,
        max_ratios,
        slope,
    })
}
