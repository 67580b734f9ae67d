//! INI experiment files: one experiment per section, keys as below. Keys in
//! the unnamed leading section are defaults for every experiment.
//!
//! ```ini
//! [easom]
//! function = easom
//! algo = slm
//! max_gens = 11
//!
//! [bowl]
//! expr = (x1 - 1)^2 + x2^2
//! lower = -2
//! upper = 2
//! dim = 2
//! algo = slmga
//! h_tol = 0.001
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::Ini;

use crate::baselines::{BaselineAlgo, BaselineConfig};
use crate::domain::BoxDomain;
use crate::engine::slm::SlmConfig;
use crate::engine::slmga::GaConfig;
use crate::engine::{NeighborScheme, PopulationMode, Sense};
use crate::error::{Error, Result};
use crate::harness::experiment::{AlgorithmConfig, ExperimentConfig, ObjectiveSpec, OutputFormat};
use crate::labeling::{LabelRule, LabelVariant};

/// Every key an experiment section may set.
pub const KEYS: &[&str] = &[
    "function", "expr", "dim", "lower", "upper", "algo", "seed", "trials", "h_tol", "max_gens", "format",
    "out", "svg", "scheme", "label_rule", "epsilon", "mutation_rate", "population_mode", "sense",
    "budget", "initial", "step_scale", "t0", "cooling", "population", "crossover", "f_min", "f_max",
];

pub const ALGORITHMS: &[&str] = &["slm", "slmga", "rs", "rsw", "sa", "de"];

fn cfg_err(msg: String) -> Error {
    Error::Config(msg)
}

struct Keys<'a>(&'a BTreeMap<String, String>);

impl Keys<'_> {
    fn get(&self, k: &str) -> Option<&str> {
        self.0.get(k).map(|s| s.trim())
    }

    fn parse<T: FromStr>(&self, k: &str) -> Result<Option<T>> {
        self.get(k)
            .map(|v| v.parse::<T>().map_err(|_| cfg_err(format!("bad value `{v}` for `{k}`"))))
            .transpose()
    }

    fn list(&self, k: &str) -> Result<Option<Vec<f64>>> {
        self.get(k)
            .map(|v| {
                v.split(',')
                    .map(|p| p.trim().parse::<f64>().map_err(|_| cfg_err(format!("bad number `{p}` in `{k}`"))))
                    .collect()
            })
            .transpose()
    }
}

fn scheme(s: &str) -> Result<NeighborScheme> {
    match s.to_ascii_lowercase().as_str() {
        "full" | "fullbox" | "full-box" => Ok(NeighborScheme::FullBox),
        "sign" | "signuniform" | "sign-uniform" => Ok(NeighborScheme::SignUniform),
        "axis" | "coordinatewise" => Ok(NeighborScheme::Coordinatewise),
        _ => Err(cfg_err(format!("unknown scheme `{s}`"))),
    }
}

fn domain(k: &Keys<'_>) -> Result<BoxDomain> {
    let lower = k.list("lower")?.unwrap_or_else(|| vec![-1.0]);
    let upper = k.list("upper")?.unwrap_or_else(|| vec![1.0]);
    let dim = k
        .parse::<usize>("dim")?
        .unwrap_or(lower.len().max(upper.len()));
    let widen = |v: Vec<f64>, name: &str| -> Result<Vec<f64>> {
        match v.len() {
            1 => Ok(vec![v[0]; dim]),
            n if n == dim => Ok(v),
            n => Err(cfg_err(format!("`{name}` has {n} entries for dimension {dim}"))),
        }
    };
    BoxDomain::new(widen(lower, "lower")?, widen(upper, "upper")?)
}

/// Build one experiment from `key = value` pairs. The objective is resolved
/// once so that unknown names and parse errors surface here.
pub fn experiment_from_pairs(name: &str, pairs: &BTreeMap<String, String>) -> Result<ExperimentConfig> {
    if let Some(bad) = pairs.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(cfg_err(format!("unknown key `{bad}` in `{name}`")));
    }
    let k = Keys(pairs);
    let objective = match (k.get("function"), k.get("expr")) {
        (Some(_), Some(_)) => return Err(cfg_err(format!("`{name}` sets both function and expr"))),
        (Some(f), None) => ObjectiveSpec::Named(f.to_string()),
        (None, Some(e)) => ObjectiveSpec::Expr {
            source: e.to_string(),
            domain: domain(&k)?,
        },
        (None, None) => return Err(cfg_err(format!("`{name}` needs a function or an expr"))),
    };
    let f = objective.resolve()?;
    if let (ObjectiveSpec::Named(_), Some(dim)) = (&objective, k.parse::<usize>("dim")?) {
        if dim != f.dim() {
            return Err(cfg_err(format!("{} is {}-dimensional, not {dim}", f.name(), f.dim())));
        }
    }

    let algo = k.get("algo").unwrap_or("slmga").to_ascii_lowercase();
    let h_tol = k.parse::<f64>("h_tol")?;
    let max_gens = k.parse::<u32>("max_gens")?;
    let label_rule = LabelRule {
        variant: match k.get("label_rule").map(str::to_ascii_lowercase).as_deref() {
            None | Some("best-neighbor") | Some("delta") => LabelVariant::BestNeighbor,
            Some("gradient") => LabelVariant::GradientFixedPoint,
            Some(o) => return Err(cfg_err(format!("unknown label_rule `{o}`"))),
        },
        epsilon: k.parse("epsilon")?.unwrap_or(0.0),
    };
    let population = match k.get("population_mode").map(str::to_ascii_lowercase).as_deref() {
        None | Some("auto") => PopulationMode::Auto,
        Some("lattice") => PopulationMode::Lattice,
        Some("reduced") => PopulationMode::Reduced,
        Some(o) => return Err(cfg_err(format!("unknown population_mode `{o}`"))),
    };
    let algorithm = match algo.as_str() {
        "slm" => {
            let d = SlmConfig::default();
            AlgorithmConfig::Slm(SlmConfig {
                h_tol: h_tol.unwrap_or(d.h_tol),
                max_levels: max_gens.unwrap_or(d.max_levels),
                neighbor_scheme: k.get("scheme").map(scheme).transpose()?.unwrap_or(d.neighbor_scheme),
                objective_sense: match k.get("sense").map(str::to_ascii_lowercase).as_deref() {
                    None | Some("min") | Some("minimize") => Sense::Minimize,
                    Some("max") | Some("maximize") => Sense::Maximize,
                    Some(o) => return Err(cfg_err(format!("unknown sense `{o}`"))),
                },
            })
        }
        "slmga" => {
            let d = GaConfig::default();
            AlgorithmConfig::Slmga(GaConfig {
                label_rule,
                mutation_rate: k.parse("mutation_rate")?.unwrap_or(d.mutation_rate),
                h_tol: h_tol.unwrap_or(d.h_tol),
                max_generations: max_gens.unwrap_or(d.max_generations),
                seed: 0,
                population,
            })
        }
        "rs" | "rsw" | "sa" | "de" => {
            let a = match algo.as_str() {
                "rs" => BaselineAlgo::Rs,
                "rsw" => BaselineAlgo::Rsw,
                "sa" => BaselineAlgo::Sa,
                _ => BaselineAlgo::De,
            };
            let default_budget = if a == BaselineAlgo::De { 260 } else { 1000 };
            let budget = k.parse::<u64>("budget")?.or(max_gens.map(u64::from)).unwrap_or(default_budget);
            let mut b = BaselineConfig::new(a, budget, 0);
            b.initial = k.list("initial")?;
            if let Some(v) = k.parse("step_scale")? {
                b.step_scale = v;
            }
            if let Some(v) = k.parse("t0")? {
                b.initial_temperature = v;
            }
            if let Some(v) = k.parse("cooling")? {
                b.cooling = v;
            }
            if let Some(v) = k.parse("population")? {
                b.population = v;
            }
            if let Some(v) = k.parse("crossover")? {
                b.crossover = v;
            }
            b.f_range = (
                k.parse("f_min")?.unwrap_or(b.f_range.0),
                k.parse("f_max")?.unwrap_or(b.f_range.1),
            );
            b.validate()?;
            AlgorithmConfig::Baseline(b)
        }
        _ => return Err(cfg_err(format!("unknown algo `{algo}` (one of {})", ALGORITHMS.join(", ")))),
    };
    Ok(ExperimentConfig {
        name: name.to_string(),
        objective,
        algorithm,
        trials: k.parse("trials")?.unwrap_or(1),
        seed: k.parse("seed")?.unwrap_or(0),
        format: k.parse("format")?.unwrap_or(OutputFormat::Markdown),
        out: k.get("out").map(PathBuf::from),
        trace_svg: k.get("svg").map(PathBuf::from),
    })
}

/// Parse INI text into experiments, in file order.
pub fn parse_config(text: &str) -> Result<Vec<ExperimentConfig>> {
    let ini = Ini::load_from_str(text).map_err(|e| cfg_err(format!("config: {e}")))?;
    let mut defaults = BTreeMap::new();
    if let Some(general) = ini.section(None::<String>) {
        for (k, v) in general.iter() {
            defaults.insert(k.to_string(), v.to_string());
        }
    }
    let mut out = Vec::new();
    for (section, props) in ini.iter() {
        let Some(name) = section else { continue };
        let mut pairs = defaults.clone();
        for (k, v) in props.iter() {
            pairs.insert(k.to_string(), v.to_string());
        }
        out.push(experiment_from_pairs(name, &pairs)?);
    }
    if out.is_empty() {
        return Err(cfg_err("config has no experiment sections".into()));
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<Vec<ExperimentConfig>> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}
