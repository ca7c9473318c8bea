//! Plain-text experiment configuration: one `key = value` per line,
//! `#` starts a comment, unknown keys are errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{AtomDistribution, AtomKind, ModelConfig};
use crate::pastur::{self, SourceParameter, SupportEdges};

/// Which experiment a configuration drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Density,
    Edges,
    Sample,
    LocalLaw,
    CrudeBound,
    Variance,
    Concentration,
    Bias,
    PerturbationCheck,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Density => "density",
            ExperimentKind::Edges => "edges",
            ExperimentKind::Sample => "sample",
            ExperimentKind::LocalLaw => "locallaw",
            ExperimentKind::CrudeBound => "crude",
            ExperimentKind::Variance => "variance",
            ExperimentKind::Concentration => "concentration",
            ExperimentKind::Bias => "bias",
            ExperimentKind::PerturbationCheck => "perturb",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "density" => ExperimentKind::Density,
            "edges" => ExperimentKind::Edges,
            "sample" => ExperimentKind::Sample,
            "locallaw" => ExperimentKind::LocalLaw,
            "crude" => ExperimentKind::CrudeBound,
            "variance" => ExperimentKind::Variance,
            "concentration" => ExperimentKind::Concentration,
            "bias" => ExperimentKind::Bias,
            "perturb" => ExperimentKind::PerturbationCheck,
            _ => return None,
        })
    }
}

/// Fully resolved experiment parameters. Construct with [`ExperimentConfig::new`]
/// (kind-specific defaults), then layer a config file and CLI overrides on
/// top.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,

    // Model.
    pub n: usize,
    pub a: f64,
    pub atoms: AtomKind,
    pub seed: u64,
    /// None disables entry truncation.
    pub truncation_exponent: Option<f64>,

    // Monte Carlo shape.
    pub trials: usize,
    pub n_list: Vec<usize>,

    // Grids and thresholds.
    pub delta: f64,
    pub margin: f64,
    pub eta: f64,
    pub eta_list: Vec<f64>,
    /// None means "the positive band midpoint".
    pub x: Option<f64>,
    pub epsilons: Vec<f64>,
    /// Explicit intervals; None means auto placement from
    /// (interval_width, interval_count).
    pub intervals: Option<Vec<(f64, f64)>>,
    pub interval_width: f64,
    pub interval_count: usize,
    /// Crude-bound width factor: |I| = width_factor (ln n)^2 / n.
    pub width_factor: f64,
    pub intervals_per_trial: usize,

    // Density grid.
    pub grid_lo: Option<f64>,
    pub grid_hi: Option<f64>,
    pub grid_points: usize,
    /// Histogram bins for the SVG overlay.
    pub bins: usize,

    // Perturbation check.
    pub h: f64,
    pub seed_count: usize,

    // Output plumbing (not part of the config hash).
    pub out_dir: PathBuf,
    pub svg: bool,
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        let mut cfg = Self {
            kind,
            n: 400,
            a: 2.0,
            atoms: AtomKind::Gaussian,
            seed: 1,
            truncation_exponent: Some(crate::model::DEFAULT_TRUNCATION_EXPONENT),
            trials: 100,
            n_list: vec![128, 256, 512, 1024],
            delta: 0.1,
            margin: 0.05,
            eta: 0.1,
            eta_list: vec![0.1],
            x: None,
            epsilons: vec![0.002, 0.005, 0.01, 0.02, 0.05],
            intervals: None,
            interval_width: 0.05,
            interval_count: 10,
            width_factor: 4.0,
            intervals_per_trial: 8,
            grid_lo: None,
            grid_hi: None,
            grid_points: 401,
            bins: 60,
            h: 1e-5,
            seed_count: 20,
            out_dir: PathBuf::from("out"),
            svg: false,
            threads: None,
        };
        match kind {
            ExperimentKind::Bias => {
                cfg.eta = 1.0;
                cfg.eta_list = vec![1.0];
                cfg.trials = 400;
            }
            ExperimentKind::PerturbationCheck => {
                cfg.n = 8;
            }
            ExperimentKind::LocalLaw => {
                cfg.trials = 50;
            }
            ExperimentKind::CrudeBound => {
                cfg.trials = 50;
                cfg.n_list = vec![250, 500, 1000, 2000];
            }
            _ => {}
        }
        cfg
    }

    /// Layer `key = value` lines from a file over the current values.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        self.apply_text(&text)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|e| match e {
                    Error::Config(msg) => Error::Config(format!("line {}: {msg}", lineno + 1)),
                    other => other,
                })?;
        }
        Ok(())
    }

    /// Set a single key. Unknown keys are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "experiment" => {
                let k = ExperimentKind::from_name(value).ok_or_else(|| {
                    Error::Config(format!("unknown experiment '{value}'"))
                })?;
                if k != self.kind {
                    return Err(Error::Config(format!(
                        "config is for experiment '{}' but '{}' was requested",
                        k.name(),
                        self.kind.name()
                    )));
                }
            }
            "n" => self.n = parse(key, value)?,
            "a" => self.a = parse(key, value)?,
            "atoms" => {
                self.atoms = match value {
                    "gaussian" => AtomKind::Gaussian,
                    "rademacher" => AtomKind::RademacherLike,
                    "uniform" => AtomKind::BoundedUniform,
                    "zero" => AtomKind::Zero,
                    _ => {
                        return Err(Error::Config(format!(
                            "atoms must be gaussian|rademacher|uniform|zero, got '{value}'"
                        )))
                    }
                }
            }
            "seed" => self.seed = parse(key, value)?,
            "truncation_exponent" => {
                self.truncation_exponent = if value == "none" {
                    None
                } else {
                    Some(parse(key, value)?)
                }
            }
            "trials" => self.trials = parse(key, value)?,
            "n_list" => self.n_list = parse_list(key, value)?,
            "delta" => self.delta = parse(key, value)?,
            "margin" => self.margin = parse(key, value)?,
            "eta" => {
                self.eta = parse(key, value)?;
                self.eta_list = vec![self.eta];
            }
            "eta_list" => {
                self.eta_list = parse_list(key, value)?;
                if let Some(&first) = self.eta_list.first() {
                    self.eta = first;
                }
            }
            "x" => {
                self.x = if value == "mid" {
                    None
                } else {
                    Some(parse(key, value)?)
                }
            }
            "epsilons" => self.epsilons = parse_list(key, value)?,
            "intervals" => {
                self.intervals = if value == "auto" {
                    None
                } else {
                    Some(parse_intervals(value)?)
                }
            }
            "interval_width" => self.interval_width = parse(key, value)?,
            "interval_count" => self.interval_count = parse(key, value)?,
            "width_factor" => self.width_factor = parse(key, value)?,
            "intervals_per_trial" => self.intervals_per_trial = parse(key, value)?,
            "grid_lo" => self.grid_lo = Some(parse(key, value)?),
            "grid_hi" => self.grid_hi = Some(parse(key, value)?),
            "grid_points" => self.grid_points = parse(key, value)?,
            "bins" => self.bins = parse(key, value)?,
            "h" => self.h = parse(key, value)?,
            "seed_count" => self.seed_count = parse(key, value)?,
            "out" => self.out_dir = PathBuf::from(value),
            "svg" => {
                self.svg = match value {
                    "true" | "1" | "yes" => true,
                    "false" | "0" | "no" => false,
                    _ => {
                        return Err(Error::Config(format!(
                            "svg must be true or false, got '{value}'"
                        )))
                    }
                }
            }
            "threads" => self.threads = Some(parse(key, value)?),
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn source(&self) -> Result<SourceParameter> {
        SourceParameter::new(self.a)
    }

    pub fn atom_distribution(&self) -> AtomDistribution {
        AtomDistribution::new(self.atoms)
    }

    pub fn model_with_n(&self, n: usize) -> Result<ModelConfig> {
        let mut m = ModelConfig::new(n, self.source()?, self.atom_distribution(), self.seed)?;
        m.truncation_exponent = self.truncation_exponent;
        Ok(m)
    }

    pub fn model(&self) -> Result<ModelConfig> {
        self.model_with_n(self.n)
    }

    /// Support edges for the configured source strength.
    pub fn edges(&self) -> Result<SupportEdges> {
        pastur::support_edges(&self.source()?)
    }

    /// The abscissa to probe: explicit `x`, else the positive band midpoint.
    pub fn resolve_x(&self) -> Result<f64> {
        match self.x {
            Some(x) => Ok(x),
            None => Ok(self.edges()?.band_midpoint()),
        }
    }

    /// Evaluation intervals for the local law: explicit ones validated
    /// against the bulk, or `interval_count` intervals of width
    /// `interval_width` placed evenly inside the bands.
    pub fn bulk_intervals(&self) -> Result<Vec<(f64, f64)>> {
        let edges = self.edges()?;
        if let Some(explicit) = &self.intervals {
            for &(lo, hi) in explicit {
                validate_bulk_interval(&edges, lo, hi, self.margin)?;
            }
            return Ok(explicit.clone());
        }

        let w = self.interval_width;
        let count = self.interval_count;
        let mut out = Vec::with_capacity(count);
        if edges.z2 == 0.0 {
            // Single band (-z1, z1).
            let lo_c = -edges.z1 + self.margin + 0.5 * w;
            let hi_c = edges.z1 - self.margin - 0.5 * w;
            if hi_c <= lo_c {
                return Err(Error::Config(
                    "band too narrow for the requested intervals".into(),
                ));
            }
            for i in 0..count {
                let t = (i as f64 + 0.5) / count as f64;
                let c = lo_c + t * (hi_c - lo_c);
                out.push((c - 0.5 * w, c + 0.5 * w));
            }
        } else {
            let pos = count - count / 2;
            let lo_c = edges.z2 + self.margin + 0.5 * w;
            let hi_c = edges.z1 - self.margin - 0.5 * w;
            if hi_c <= lo_c {
                return Err(Error::Config(
                    "band too narrow for the requested intervals".into(),
                ));
            }
            let mut centers = Vec::with_capacity(pos);
            for i in 0..pos {
                let t = (i as f64 + 0.5) / pos as f64;
                centers.push(lo_c + t * (hi_c - lo_c));
            }
            for &c in centers.iter().take(count / 2) {
                out.push((-c - 0.5 * w, -c + 0.5 * w));
            }
            for &c in &centers {
                out.push((c - 0.5 * w, c + 0.5 * w));
            }
            out.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
        }
        for &(lo, hi) in &out {
            validate_bulk_interval(&edges, lo, hi, self.margin)?;
        }
        Ok(out)
    }

    /// Canonical text of the science-relevant parameters. Output plumbing
    /// (out, svg, threads) is excluded so reruns with different worker
    /// counts hash identically.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment = {}", self.kind.name());
        let _ = writeln!(s, "n = {}", self.n);
        let _ = writeln!(s, "a = {}", self.a);
        let atoms = match self.atoms {
            AtomKind::Gaussian => "gaussian",
            AtomKind::RademacherLike => "rademacher",
            AtomKind::BoundedUniform => "uniform",
            AtomKind::Zero => "zero",
        };
        let _ = writeln!(s, "atoms = {atoms}");
        let _ = writeln!(s, "seed = {}", self.seed);
        match self.truncation_exponent {
            Some(e) => {
                let _ = writeln!(s, "truncation_exponent = {e}");
            }
            None => {
                let _ = writeln!(s, "truncation_exponent = none");
            }
        }
        let _ = writeln!(s, "trials = {}", self.trials);
        let _ = writeln!(s, "n_list = {}", join(&self.n_list));
        let _ = writeln!(s, "delta = {}", self.delta);
        let _ = writeln!(s, "margin = {}", self.margin);
        let _ = writeln!(s, "eta = {}", self.eta);
        let _ = writeln!(s, "eta_list = {}", join(&self.eta_list));
        match self.x {
            Some(x) => {
                let _ = writeln!(s, "x = {x}");
            }
            None => {
                let _ = writeln!(s, "x = mid");
            }
        }
        let _ = writeln!(s, "epsilons = {}", join(&self.epsilons));
        match &self.intervals {
            Some(list) => {
                let parts: Vec<String> =
                    list.iter().map(|(lo, hi)| format!("{lo}:{hi}")).collect();
                let _ = writeln!(s, "intervals = {}", parts.join(","));
            }
            None => {
                let _ = writeln!(s, "intervals = auto");
            }
        }
        let _ = writeln!(s, "interval_width = {}", self.interval_width);
        let _ = writeln!(s, "interval_count = {}", self.interval_count);
        let _ = writeln!(s, "width_factor = {}", self.width_factor);
        let _ = writeln!(s, "intervals_per_trial = {}", self.intervals_per_trial);
        if let Some(g) = self.grid_lo {
            let _ = writeln!(s, "grid_lo = {g}");
        }
        if let Some(g) = self.grid_hi {
            let _ = writeln!(s, "grid_hi = {g}");
        }
        let _ = writeln!(s, "grid_points = {}", self.grid_points);
        let _ = writeln!(s, "bins = {}", self.bins);
        let _ = writeln!(s, "h = {}", self.h);
        let _ = writeln!(s, "seed_count = {}", self.seed_count);
        s
    }

    /// Hex SHA-256 of the canonical text; the first line of every report.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_text().as_bytes());
        let mut out = String::with_capacity(64);
        for byte in digest {
            let _ = write!(out, "{byte:02x}");
        }
        out
    }
}

/// An interval is admissible for bulk statistics when it sits strictly
/// inside one band, `margin` away from every edge.
pub fn validate_bulk_interval(
    edges: &SupportEdges,
    lo: f64,
    hi: f64,
    margin: f64,
) -> Result<()> {
    let err = || Error::BulkIntervalRequired {
        lo,
        hi,
        z2: edges.z2,
        z1: edges.z1,
        margin,
    };
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(err());
    }
    if edges.z2 == 0.0 {
        // Single band: just stay away from the outer edges.
        if lo <= -edges.z1 + margin || hi >= edges.z1 - margin {
            return Err(err());
        }
        return Ok(());
    }
    let in_pos = lo >= edges.z2 + margin && hi <= edges.z1 - margin;
    let in_neg = lo >= -edges.z1 + margin && hi <= -edges.z2 - margin;
    if in_pos || in_neg {
        Ok(())
    } else {
        Err(err())
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse '{value}' for key '{key}'")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|part| parse(key, part.trim()))
        .collect()
}

fn parse_intervals(value: &str) -> Result<Vec<(f64, f64)>> {
    value
        .split(',')
        .map(|part| {
            let (lo, hi) = part.trim().split_once(':').ok_or_else(|| {
                Error::Config(format!("interval '{part}' must look like lo:hi"))
            })?;
            Ok((parse("intervals", lo.trim())?, parse("intervals", hi.trim())?))
        })
        .collect()
}

fn join<T: std::fmt::Display>(list: &[T]) -> String {
    list.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::LocalLaw);
        cfg.apply_text(
            "# comment line\n\
             n = 2000\n\
             a = 2.0   # trailing comment\n\
             atoms = gaussian\n\
             trials = 200\n\
             delta = 0.1\n\
             intervals = auto\n\
             interval_width = 0.05\n\
             interval_count = 10\n",
        )
        .unwrap();
        assert_eq!(cfg.n, 2000);
        assert_eq!(cfg.trials, 200);
        assert_eq!(cfg.interval_count, 10);
    }

    #[test]
    fn unknown_key_is_an_error() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::Density);
        let err = cfg.apply_text("no_such_key = 1\n").unwrap_err();
        assert!(err.to_string().contains("unknown key"));
    }

    #[test]
    fn malformed_line_is_an_error() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::Density);
        assert!(cfg.apply_text("just words\n").is_err());
    }

    #[test]
    fn experiment_key_must_match() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::Density);
        assert!(cfg.apply_text("experiment = density\n").is_ok());
        assert!(cfg.apply_text("experiment = bias\n").is_err());
    }

    #[test]
    fn hash_ignores_output_plumbing() {
        let mut a = ExperimentConfig::new(ExperimentKind::Variance);
        let mut b = ExperimentConfig::new(ExperimentKind::Variance);
        b.threads = Some(8);
        b.svg = true;
        b.out_dir = PathBuf::from("elsewhere");
        assert_eq!(a.hash(), b.hash());
        a.seed = 777;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn auto_intervals_sit_inside_the_bands() {
        let cfg = {
            let mut c = ExperimentConfig::new(ExperimentKind::LocalLaw);
            c.interval_count = 10;
            c.interval_width = 0.05;
            c
        };
        let edges = cfg.edges().unwrap();
        let intervals = cfg.bulk_intervals().unwrap();
        assert_eq!(intervals.len(), 10);
        for (lo, hi) in intervals {
            assert!((hi - lo - 0.05).abs() < 1e-12);
            validate_bulk_interval(&edges, lo, hi, cfg.margin).unwrap();
        }
    }

    #[test]
    fn gap_interval_is_rejected() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::LocalLaw);
        cfg.intervals = Some(vec![(-0.2, 0.2)]);
        assert!(matches!(
            cfg.bulk_intervals(),
            Err(Error::BulkIntervalRequired { .. })
        ));
    }

    #[test]
    fn semicircle_center_interval_is_accepted() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::LocalLaw);
        cfg.a = 0.0;
        cfg.intervals = Some(vec![(-0.5, 0.5)]);
        assert_eq!(cfg.bulk_intervals().unwrap().len(), 1);
    }
}
