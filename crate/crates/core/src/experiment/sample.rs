//! Debug dump of one assembled matrix: upper-triangle entries as
//! `i,j,re,im` rows.

use crate::error::Result;
use crate::model::assemble;
use crate::stream::{trial_stream, Lane};

use super::config::ExperimentConfig;
use super::report::{fmt, Report};

pub fn run_sample(cfg: &ExperimentConfig) -> Result<Report> {
    let model = cfg.model()?;
    let mut rng = trial_stream(model.seed, 0, Lane::Matrix);
    let w = assemble(&model, &mut rng)?;
    let mut report = Report::new(cfg.hash(), &["i", "j", "re", "im"]);
    for i in 0..model.n {
        for j in i..model.n {
            let v = w.get(i, j);
            report.push_row(vec![
                i.to_string(),
                j.to_string(),
                fmt(v.re),
                fmt(v.im),
            ]);
        }
    }
    Ok(report)
}
