//! Density grid export, with an optional SVG overlay of one sampled
//! spectrum's histogram against the limiting curve.

use crate::eigen;
use crate::error::Result;
use crate::model::assemble;
use crate::pastur::{self, Regime};
use crate::stream::{trial_stream, Lane};

use super::config::ExperimentConfig;
use super::report::{fmt, Report};
use super::svg;

#[derive(Debug)]
pub struct DensityOutcome {
    pub report: Report,
    pub svg: Option<String>,
}

/// Resolve the export window: explicit bounds, else the support padded by
/// half a unit on each side.
fn grid_bounds(cfg: &ExperimentConfig) -> Result<(f64, f64)> {
    let source = cfg.source()?;
    let auto_hi = match source.regime() {
        Regime::Other => cfg.a + 3.0,
        _ => pastur::support_edges(&source)?.z1 + 0.5,
    };
    Ok((
        cfg.grid_lo.unwrap_or(-auto_hi),
        cfg.grid_hi.unwrap_or(auto_hi),
    ))
}

/// Write the `x,rho` grid; when `cfg.svg` is set, also render the curve
/// with a normalized eigenvalue histogram from a single sampled matrix.
pub fn emit_density(cfg: &ExperimentConfig) -> Result<DensityOutcome> {
    let source = cfg.source()?;
    let (lo, hi) = grid_bounds(cfg)?;
    let points = cfg.grid_points.max(1);

    let mut report = Report::new(cfg.hash(), &["x", "rho"]);
    if source.regime() == Regime::Other {
        report.note(
            "0 < a <= 1: outside the two-band hypotheses; \
             the cubic density is exported as-is",
        );
    }
    let mut curve = Vec::with_capacity(points);
    for i in 0..points {
        let x = if points == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (points - 1) as f64
        };
        let rho = pastur::density(x, &source)?.rho;
        curve.push((x, rho));
        report.push_row(vec![fmt(x), fmt(rho)]);
    }

    let svg = if cfg.svg {
        let model = cfg.model()?;
        let mut rng = trial_stream(model.seed, 0, Lane::Matrix);
        let w = assemble(&model, &mut rng)?;
        let sample = eigen::eigenvalues(&w)?;
        let hist = svg::histogram_outline(sample.values(), lo, hi, cfg.bins.max(1));
        Some(svg::polyline_chart(&[
            ("limiting-density", curve),
            ("eigenvalue-histogram", hist),
        ]))
    } else {
        None
    };

    Ok(DensityOutcome { report, svg })
}
