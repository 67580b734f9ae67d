//! Comparison optimizers: uniform random search, random walk from a start
//! point, simulated annealing and differential evolution (DE/rand/1/bin).
//!
//! They produce the same [`RunReport`] as the grid engines. Points off the
//! grid carry a level-0 [`GridPoint`] with no coordinates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::domain::{BoxDomain, Candidate, GridPoint, RunReport, StepRecord};
use crate::error::{Error, Result};
use crate::functions::Objective;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaselineAlgo {
    Rs,
    Rsw,
    Sa,
    De,
}

impl BaselineAlgo {
    pub fn name(self) -> &'static str {
        match self {
            BaselineAlgo::Rs => "rs",
            BaselineAlgo::Rsw => "rsw",
            BaselineAlgo::Sa => "sa",
            BaselineAlgo::De => "de",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    pub algo: BaselineAlgo,
    /// Evaluations for RS, RSW and SA; generations for DE.
    pub budget: u64,
    pub seed: u64,
    /// Start point for RSW and SA. RSW requires one; SA draws one if absent.
    pub initial: Option<Vec<f64>>,
    /// RSW ball radius and SA proposal deviation, as a fraction of each
    /// box width.
    pub step_scale: f64,
    pub initial_temperature: f64,
    /// Geometric cooling factor, in (0, 1).
    pub cooling: f64,
    pub population: usize,
    pub crossover: f64,
    /// DE differential weight is drawn uniformly from this range once per
    /// generation.
    pub f_range: (f64, f64),
}

impl BaselineConfig {
    pub fn new(algo: BaselineAlgo, budget: u64, seed: u64) -> Self {
        Self {
            algo,
            budget,
            seed,
            initial: None,
            step_scale: 0.01,
            initial_temperature: 1.0,
            cooling: 0.995,
            population: 20,
            crossover: 0.9,
            f_range: (0.4, 1.0),
        }
    }

    pub fn with_initial(mut self, x: Vec<f64>) -> Self {
        self.initial = Some(x);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::Config("budget must be at least 1".into()));
        }
        match self.algo {
            BaselineAlgo::Rs => {}
            BaselineAlgo::Rsw | BaselineAlgo::Sa => {
                if !(self.step_scale > 0.0 && self.step_scale.is_finite()) {
                    return Err(Error::Config(format!("step_scale must be positive, got {}", self.step_scale)));
                }
                if self.algo == BaselineAlgo::Sa {
                    if !(self.cooling > 0.0 && self.cooling < 1.0) {
                        return Err(Error::Config(format!("cooling must be in (0, 1), got {}", self.cooling)));
                    }
                    if !(self.initial_temperature > 0.0 && self.initial_temperature.is_finite()) {
                        return Err(Error::Config(format!(
                            "initial temperature must be positive, got {}",
                            self.initial_temperature
                        )));
                    }
                }
            }
            BaselineAlgo::De => {
                if self.population < 4 {
                    return Err(Error::Config(format!("DE needs a population of at least 4, got {}", self.population)));
                }
                if !(0.0..=1.0).contains(&self.crossover) {
                    return Err(Error::Config(format!("crossover must be in [0, 1], got {}", self.crossover)));
                }
                let (lo, hi) = self.f_range;
                if !(lo > 0.0 && lo <= hi && hi <= 2.0) {
                    return Err(Error::Config(format!("F range must satisfy 0 < lo <= hi <= 2, got ({lo}, {hi})")));
                }
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> Vec<(String, String)> {
        let mut p = vec![
            ("algorithm".to_string(), self.algo.name().to_string()),
            ("budget".into(), self.budget.to_string()),
            ("seed".into(), self.seed.to_string()),
        ];
        let mut push = |k: &str, v: String| p.push((k.to_string(), v));
        match self.algo {
            BaselineAlgo::Rs => {}
            BaselineAlgo::Rsw => {
                push("initial", format!("{:?}", self.initial));
                push("step_scale", self.step_scale.to_string());
            }
            BaselineAlgo::Sa => {
                push("initial", format!("{:?}", self.initial));
                push("step_scale", self.step_scale.to_string());
                push("initial_temperature", self.initial_temperature.to_string());
                push("cooling", self.cooling.to_string());
            }
            BaselineAlgo::De => {
                push("population", self.population.to_string());
                push("crossover", self.crossover.to_string());
                push("f_range", format!("{:?}", self.f_range));
            }
        }
        p
    }
}

/// Run whichever baseline `cfg.algo` names.
pub fn run_baseline(f: &Objective, cfg: &BaselineConfig) -> Result<RunReport> {
    match cfg.algo {
        BaselineAlgo::Rs => random_search(f, cfg),
        BaselineAlgo::Rsw => random_walk_search(f, cfg),
        BaselineAlgo::Sa => simulated_annealing(f, cfg),
        BaselineAlgo::De => differential_evolution(f, cfg),
    }
}

fn off_grid(x: Vec<f64>, f: f64) -> Candidate {
    Candidate {
        point: GridPoint::new(Vec::new(), 0),
        x,
        f,
    }
}

/// Evaluates with a fresh noise realization per call.
struct Sampler<'a> {
    f: &'a Objective,
    rng: ChaCha8Rng,
    evaluations: u64,
}

impl<'a> Sampler<'a> {
    fn new(f: &'a Objective, seed: u64) -> Self {
        Self {
            f,
            rng: ChaCha8Rng::seed_from_u64(seed),
            evaluations: 0,
        }
    }

    fn eval(&mut self, x: Vec<f64>) -> Result<Candidate> {
        let noise = self.rng.random::<u64>();
        let v = self.f.eval(&x, noise)?;
        if v.is_nan() {
            return Err(Error::Evaluation(format!("{} returned NaN at {x:?}", self.f.name())));
        }
        self.evaluations += 1;
        Ok(off_grid(x, v + 0.0))
    }

    fn uniform_point(&mut self) -> Vec<f64> {
        let d = self.f.domain();
        (0..d.dim())
            .map(|i| self.rng.random_range(d.lower()[i]..=d.upper()[i]))
            .collect()
    }

    fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }
}

struct Recorder {
    steps: Vec<StepRecord>,
    best: Option<Candidate>,
}

impl Recorder {
    fn new() -> Self {
        Self {
            steps: Vec::new(),
            best: None,
        }
    }

    fn offer(&mut self, c: &Candidate) {
        if self.best.as_ref().is_none_or(|b| c.f < b.f) {
            self.best = Some(c.clone());
        }
    }

    fn record(&mut self, h: Vec<f64>, population: Vec<Candidate>, evaluations: u64) {
        for c in &population {
            self.offer(c);
        }
        self.steps.push(StepRecord {
            level: self.steps.len() as u32 + 1,
            h,
            population,
            labels: Vec::new(),
            chosen_cell: None,
            best: self.best.clone().expect("offered before recording"),
            evaluations,
        });
    }

    fn finish(self, f: &Objective, cfg: &BaselineConfig, evaluations: u64) -> RunReport {
        RunReport {
            algorithm: cfg.algo.name().into(),
            objective: f.name().into(),
            params: cfg.describe(),
            steps: self.steps,
            best: self.best.expect("budget is at least one"),
            evaluations,
            converged: false,
        }
    }
}

fn check_initial(f: &Objective, x: &[f64]) -> Result<()> {
    if x.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: x.len(),
        });
    }
    if !f.domain().contains(x) {
        return Err(Error::OutOfDomain {
            objective: f.name().into(),
            point: x.to_vec(),
        });
    }
    Ok(())
}

/// `budget` independent uniform samples of the box.
pub fn random_search(f: &Objective, cfg: &BaselineConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut s = Sampler::new(f, cfg.seed);
    let mut rec = Recorder::new();
    let widths = f.domain().widths();
    for _ in 0..cfg.budget {
        let x = s.uniform_point();
        let c = s.eval(x)?;
        rec.record(widths.clone(), vec![c], 1);
    }
    Ok(rec.finish(f, cfg, s.evaluations))
}

/// Uniform sample of the ball of radius `radius[d]` (scaled per axis).
fn ball_step(s: &mut Sampler<'_>, radius: &[f64]) -> Vec<f64> {
    let n = radius.len();
    let mut dir: Vec<f64> = (0..n).map(|_| s.normal()).collect();
    let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let r = s.rng.random::<f64>().powf(1.0 / n as f64);
    for (d, v) in dir.iter_mut().enumerate() {
        *v = *v / norm * r * radius[d];
    }
    dir
}

fn clamped_add(domain: &BoxDomain, x: &[f64], step: &[f64]) -> Vec<f64> {
    let mut y: Vec<f64> = x.iter().zip(step).map(|(a, b)| a + b).collect();
    domain.clamp(&mut y);
    y
}

/// Random walk from `cfg.initial`: uniform steps in a ball, strict
/// improvements accepted, radius times 0.95 after 10 straight rejections.
pub fn random_walk_search(f: &Objective, cfg: &BaselineConfig) -> Result<RunReport> {
    cfg.validate()?;
    let start = cfg
        .initial
        .clone()
        .ok_or_else(|| Error::Config("random walk needs an initial point".into()))?;
    check_initial(f, &start)?;
    let mut s = Sampler::new(f, cfg.seed);
    let mut rec = Recorder::new();
    let mut radius: Vec<f64> = f.domain().widths().iter().map(|w| w * cfg.step_scale).collect();
    let mut current = s.eval(start)?;
    rec.record(radius.clone(), vec![current.clone()], 1);
    let mut rejections = 0;
    while s.evaluations < cfg.budget {
        let step = ball_step(&mut s, &radius);
        let trial = s.eval(clamped_add(f.domain(), &current.x, &step))?;
        rec.offer(&trial);
        if trial.f < current.f {
            current = trial;
            rejections = 0;
        } else {
            rejections += 1;
            if rejections == 10 {
                radius.iter_mut().for_each(|r| *r *= 0.95);
                rejections = 0;
            }
        }
        rec.record(radius.clone(), vec![current.clone()], 1);
    }
    Ok(rec.finish(f, cfg, s.evaluations))
}

/// Metropolis acceptance probability of a move by `df` at temperature `t`.
pub fn metropolis(df: f64, t: f64) -> f64 {
    if df <= 0.0 {
        1.0
    } else {
        (-df / t).exp()
    }
}

/// Simulated annealing with Gaussian proposals of deviation
/// `step_scale * width * T/T0`, clamped to the box, and `T <- cooling * T`
/// after every proposal. The last step's population is the final state.
pub fn simulated_annealing(f: &Objective, cfg: &BaselineConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut s = Sampler::new(f, cfg.seed);
    let start = match &cfg.initial {
        Some(x) => {
            check_initial(f, x)?;
            x.clone()
        }
        None => s.uniform_point(),
    };
    let mut rec = Recorder::new();
    let sigma0: Vec<f64> = f.domain().widths().iter().map(|w| w * cfg.step_scale).collect();
    let t0 = cfg.initial_temperature;
    let mut t = t0;
    let mut current = s.eval(start)?;
    rec.record(sigma0.clone(), vec![current.clone()], 1);
    while s.evaluations < cfg.budget {
        let sigma: Vec<f64> = sigma0.iter().map(|v| v * t / t0).collect();
        let step: Vec<f64> = sigma.iter().map(|v| v * s.normal()).collect();
        let trial = s.eval(clamped_add(f.domain(), &current.x, &step))?;
        rec.offer(&trial);
        if s.rng.random::<f64>() < metropolis(trial.f - current.f, t) {
            current = trial;
        }
        t *= cfg.cooling;
        rec.record(sigma, vec![current.clone()], 1);
    }
    Ok(rec.finish(f, cfg, s.evaluations))
}

/// DE/rand/1/bin for `budget` generations. One step record per generation;
/// the initial population's evaluations are counted in the first.
pub fn differential_evolution(f: &Objective, cfg: &BaselineConfig) -> Result<RunReport> {
    cfg.validate()?;
    let np = cfg.population;
    let n = f.dim();
    let domain = f.domain().clone();
    let mut s = Sampler::new(f, cfg.seed);
    let mut rec = Recorder::new();
    let mut pop = Vec::with_capacity(np);
    for _ in 0..np {
        let x = s.uniform_point();
        let c = s.eval(x)?;
        rec.offer(&c);
        pop.push(c);
    }
    let mut pending = np as u64;
    for _ in 0..cfg.budget {
        let weight = s.rng.random_range(cfg.f_range.0..=cfg.f_range.1);
        let mut next = Vec::with_capacity(np);
        for i in 0..np {
            let pick = |s: &mut Sampler<'_>, taken: &[usize]| loop {
                let r = s.rng.random_range(0..np);
                if !taken.contains(&r) {
                    return r;
                }
            };
            let a = pick(&mut s, &[i]);
            let b = pick(&mut s, &[i, a]);
            let c = pick(&mut s, &[i, a, b]);
            let forced = s.rng.random_range(0..n);
            let mut y = pop[i].x.clone();
            for d in 0..n {
                if d == forced || s.rng.random::<f64>() < cfg.crossover {
                    let v = pop[a].x[d] + weight * (pop[b].x[d] - pop[c].x[d]);
                    y[d] = if v < domain.lower()[d] || v > domain.upper()[d] {
                        s.rng.random_range(domain.lower()[d]..=domain.upper()[d])
                    } else {
                        v
                    };
                }
            }
            let trial = s.eval(y)?;
            next.push(if trial.f <= pop[i].f { trial } else { pop[i].clone() });
        }
        pop = next;
        rec.record(vec![weight; n], pop.clone(), pending + np as u64);
        pending = 0;
    }
    Ok(rec.finish(f, cfg, s.evaluations))
}
