//! Support-edge export.

use crate::error::Result;

use super::config::ExperimentConfig;
use super::report::{fmt, Report};

pub fn run_edges(cfg: &ExperimentConfig) -> Result<Report> {
    let edges = cfg.edges()?;
    let mut report = Report::new(cfg.hash(), &["a", "z2", "z1"]);
    report.push_row(vec![fmt(cfg.a), fmt(edges.z2), fmt(edges.z1)]);
    Ok(report)
}
