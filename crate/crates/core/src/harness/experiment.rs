//! Seeded multi-trial experiments and their metrics.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{run_baseline, BaselineConfig};
use crate::domain::{BoxDomain, RunReport};
use crate::engine::slm::{slm_run, SlmConfig};
use crate::engine::slmga::{ga_run, GaConfig};
use crate::error::{Error, Result};
use crate::functions::Objective;
use crate::harness::suite::reported_de_generations;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ObjectiveSpec {
    Named(String),
    Expr { source: String, domain: BoxDomain },
}

impl ObjectiveSpec {
    pub fn resolve(&self) -> Result<Objective> {
        match self {
            ObjectiveSpec::Named(name) => Objective::by_name(name),
            ObjectiveSpec::Expr { source, domain } => Objective::from_expr(source, domain.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AlgorithmConfig {
    Slm(SlmConfig),
    Slmga(GaConfig),
    Baseline(BaselineConfig),
}

impl AlgorithmConfig {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmConfig::Slm(_) => "slm",
            AlgorithmConfig::Slmga(_) => "slmga",
            AlgorithmConfig::Baseline(b) => b.algo.name(),
        }
    }

    /// One trial. SLM is deterministic and ignores the seed.
    pub fn run(&self, f: &Objective, seed: u64) -> Result<RunReport> {
        match self {
            AlgorithmConfig::Slm(c) => slm_run(f, c),
            AlgorithmConfig::Slmga(c) => ga_run(f, &GaConfig { seed, ..c.clone() }),
            AlgorithmConfig::Baseline(c) => run_baseline(f, &BaselineConfig { seed, ..c.clone() }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Csv,
    Markdown,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("unknown format `{s}` (csv, markdown, json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub objective: ObjectiveSpec,
    pub algorithm: AlgorithmConfig,
    pub trials: u32,
    pub seed: u64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub trace_svg: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(name: &str, objective: ObjectiveSpec, algorithm: AlgorithmConfig) -> Self {
        Self {
            name: name.to_string(),
            objective,
            algorithm,
            trials: 1,
            seed: 0,
            format: OutputFormat::Markdown,
            out: None,
            trace_svg: None,
        }
    }

    pub fn named(name: &str, objective: &str, algorithm: AlgorithmConfig) -> Self {
        Self::new(name, ObjectiveSpec::Named(objective.to_string()), algorithm)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Best value over every evaluation of the best trial.
    pub bv: f64,
    /// Median of the per-trial best values.
    pub bv_median: f64,
    /// `|x_found - x*|` per coordinate, when the optimizer is known.
    pub sd_vec: Option<Vec<f64>>,
    pub sd_euclid: Option<f64>,
    pub generations: usize,
    /// Reported DE generations over ours, for the De Jong functions.
    pub png: Option<f64>,
}

impl Metrics {
    /// Metrics of a single report.
    pub fn of(report: &RunReport, f: &Objective) -> Self {
        let sd_vec = f.known_optimum().map(|opt| {
            report
                .best
                .x
                .iter()
                .zip(&opt.x)
                .map(|(a, b)| (a - b).abs())
                .collect::<Vec<f64>>()
        });
        let sd_euclid = sd_vec.as_ref().map(|v| v.iter().map(|d| d * d).sum::<f64>().sqrt());
        let generations = report.generations();
        let png = match (report.algorithm.as_str(), reported_de_generations(f.name())) {
            ("slmga", Some(de)) if generations > 0 => Some(png_ratio(de, generations as u32)),
            _ => None,
        };
        Self {
            bv: report.best.f,
            bv_median: report.best.f,
            sd_vec,
            sd_euclid,
            generations,
            png,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub name: String,
    pub metrics: Metrics,
    /// Index into `reports` of the trial the metrics describe.
    pub best_trial: usize,
    /// One report per trial, in trial order.
    pub reports: Vec<RunReport>,
}

impl ExperimentResult {
    pub fn best_report(&self) -> &RunReport {
        &self.reports[self.best_trial]
    }

    pub fn all_converged(&self) -> bool {
        self.reports.iter().all(|r| r.converged)
    }
}

/// Run `cfg.trials` trials with seeds `seed, seed+1, ...` in parallel and
/// aggregate them in trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    if cfg.trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let f = cfg.objective.resolve()?;
    let reports: Vec<RunReport> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| cfg.algorithm.run(&f, cfg.seed.wrapping_add(u64::from(t))))
        .collect::<Result<_>>()?;
    let mut best_trial = 0;
    for (i, r) in reports.iter().enumerate() {
        if r.best.better_than(&reports[best_trial].best) {
            best_trial = i;
        }
    }
    let mut values: Vec<f64> = reports.iter().map(|r| r.best.f).collect();
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    let median = if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    };
    let mut metrics = Metrics::of(&reports[best_trial], &f);
    metrics.bv_median = median;
    Ok(ExperimentResult {
        name: cfg.name.clone(),
        metrics,
        best_trial,
        reports,
    })
}

/// Baseline generations over ours.
pub fn png_ratio(baseline_gens: u32, slmga_gens: u32) -> f64 {
    f64::from(baseline_gens) / f64::from(slmga_gens.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_examples() {
        assert_eq!(png_ratio(2300, 16).round(), 144.0);
        let f1 = png_ratio(260, 18);
        assert!((14.0..=15.0).contains(&f1));
        assert_eq!(png_ratio(7, 7), 1.0);
    }

    #[test]
    fn f1_slmga_metrics() {
        let cfg = ExperimentConfig::named(
            "f1",
            "f1",
            AlgorithmConfig::Slmga(GaConfig {
                h_tol: 1e-4,
                ..GaConfig::default()
            }),
        );
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.metrics.generations, 18);
        assert_eq!(r.metrics.bv, 0.0);
        assert_eq!(r.metrics.sd_euclid, Some(0.0));
        assert_eq!(r.metrics.png.map(f64::round), Some(14.0));
    }

    #[test]
    fn trials_are_reproducible() {
        let mut cfg = ExperimentConfig::named(
            "rs",
            "f1",
            AlgorithmConfig::Baseline(BaselineConfig::new(crate::baselines::BaselineAlgo::Rs, 50, 0)),
        );
        cfg.trials = 3;
        cfg.seed = 11;
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.reports[0].best, a.reports[1].best);
        assert!(run_experiment(&ExperimentConfig { trials: 0, ..cfg }).is_err());
    }
}
