//! Level-by-level subdivision search shared by the serial labeling method
//! ([`slm`]) and its genetic formulation ([`slmga`]).
//!
//! One step at level `g`:
//!
//! 1. every selected population member probes its neighbors one level finer
//!    (step `h_{g+1}`) and keeps the best offspring;
//! 2. the member is labeled from `best_offspring - member` (or from the
//!    gradient under the fixed-point rule);
//! 3. completely labeled level-`g` cells are located, and the one holding the
//!    best labeled vertex is chosen (the first cell containing the best point
//!    so far if none is complete);
//! 4. the next population is the chosen cell's `3^n` crossing points one
//!    level finer.
//!
//! In more than [`LATTICE_MAX_DIM`] dimensions the `3^n` lattice and
//! neighborhood are out of reach; the search then keeps a reduced population
//! (best point plus the chosen cell's center) and probes coordinate-wise.

pub mod slm;
pub mod slmga;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{Candidate, Cell, GridPoint, GridSpec, LabeledVertex, RunReport, StepRecord};
use crate::error::{Error, Result};
use crate::functions::Objective;
use crate::labeling::{self, LabelRule, LabelVariant};

/// Largest dimension searched with full `3^n` lattices.
pub const LATTICE_MAX_DIM: usize = 6;

/// Largest dimension for which the `2^n` box corners are enumerated.
pub const CORNER_MAX_DIM: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NeighborScheme {
    /// One sign applied to every coordinate of a nonempty subset:
    /// at most `2(2^n - 1)` probes.
    SignUniform,
    /// `x + α`, `α ∈ {0, ±h}^n`: `3^n` probes including the point itself.
    FullBox,
    /// `±h` along each axis, plus the composite of the improving axis moves.
    Coordinatewise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PopulationMode {
    /// Lattice for `n <= LATTICE_MAX_DIM`, reduced above.
    Auto,
    Lattice,
    Reduced,
}

/// Everything the level loop needs; built by the SLM and SLMGA front ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSettings {
    pub algorithm: String,
    pub scheme: NeighborScheme,
    pub label_rule: LabelRule,
    pub h_tol: f64,
    pub max_levels: u32,
    /// Fraction of the population (fittest first) that is mutated.
    pub mutation_rate: f64,
    pub sense: Sense,
    pub population: PopulationMode,
    /// Keys the per-step noise realization of stochastic objectives.
    pub seed: u64,
}

impl SearchSettings {
    pub fn validate(&self, obj: &Objective) -> Result<()> {
        if !(self.h_tol > 0.0) || !self.h_tol.is_finite() {
            return Err(Error::Config(format!("h_tol must be positive, got {}", self.h_tol)));
        }
        if self.max_levels == 0 || self.max_levels >= crate::domain::MAX_LEVEL {
            return Err(Error::Config(format!(
                "max_levels must be in 1..{}, got {}",
                crate::domain::MAX_LEVEL,
                self.max_levels
            )));
        }
        if !(self.mutation_rate > 0.0 && self.mutation_rate <= 1.0) {
            return Err(Error::Config(format!(
                "mutation_rate must be in (0, 1], got {}",
                self.mutation_rate
            )));
        }
        let widest = obj.domain().widths().into_iter().fold(0.0, f64::max);
        if self.h_tol >= widest {
            return Err(Error::Config(format!(
                "h_tol {} is not below the initial step {widest}",
                self.h_tol
            )));
        }
        if self.reduced(obj.dim()) && self.scheme != NeighborScheme::Coordinatewise {
            return Err(Error::Config(format!(
                "{}-dimensional reduced search needs the coordinatewise scheme",
                obj.dim()
            )));
        }
        Ok(())
    }

    pub fn reduced(&self, dim: usize) -> bool {
        match self.population {
            PopulationMode::Auto => dim > LATTICE_MAX_DIM,
            PopulationMode::Lattice => false,
            PopulationMode::Reduced => true,
        }
    }

    pub fn describe(&self) -> Vec<(String, String)> {
        vec![
            ("algorithm".into(), self.algorithm.clone()),
            ("scheme".into(), format!("{:?}", self.scheme)),
            ("label_rule".into(), format!("{:?}", self.label_rule.variant)),
            ("epsilon".into(), self.label_rule.epsilon.to_string()),
            ("h_tol".into(), self.h_tol.to_string()),
            ("max_levels".into(), self.max_levels.to_string()),
            ("mutation_rate".into(), self.mutation_rate.to_string()),
            ("sense".into(), format!("{:?}", self.sense)),
            ("population".into(), format!("{:?}", self.population)),
            ("seed".into(), self.seed.to_string()),
        ]
    }
}

/// All `2^n` corners of the box as level-1 grid points.
pub fn initial_corners(dim: usize) -> Result<Vec<GridPoint>> {
    if dim > CORNER_MAX_DIM {
        return Err(Error::DimensionTooLarge(dim));
    }
    Ok(Cell::root(dim).vertices()?)
}

/// Integer neighbors of `p` on its own grid (already at the probing level),
/// dropping any that leave the box. The point itself is not included.
pub fn neighbor_points(p: &GridPoint, scheme: NeighborScheme, max_index: u64) -> Vec<GridPoint> {
    let n = p.dim();
    let shift = |offs: &[i64]| -> Option<GridPoint> {
        let mut k = Vec::with_capacity(n);
        for (d, &o) in offs.iter().enumerate() {
            let v = p.k[d] as i64 + o;
            if v < 0 || v as u64 > max_index {
                return None;
            }
            k.push(v as u64);
        }
        Some(GridPoint::new(k, p.level))
    };
    let mut out = Vec::new();
    match scheme {
        NeighborScheme::SignUniform => {
            for mask in 1u64..(1 << n) {
                for sign in [1i64, -1] {
                    let offs: Vec<i64> = (0..n)
                        .map(|d| if (mask >> (n - 1 - d)) & 1 == 1 { sign } else { 0 })
                        .collect();
                    out.extend(shift(&offs));
                }
            }
        }
        NeighborScheme::FullBox => {
            for code in 0..3usize.pow(n as u32) {
                let mut c = code;
                let mut offs = vec![0i64; n];
                for d in (0..n).rev() {
                    offs[d] = (c % 3) as i64 - 1;
                    c /= 3;
                }
                if offs.iter().all(|&o| o == 0) {
                    continue;
                }
                out.extend(shift(&offs));
            }
        }
        NeighborScheme::Coordinatewise => {
            for d in 0..n {
                for sign in [1i64, -1] {
                    let mut offs = vec![0i64; n];
                    offs[d] = sign;
                    out.extend(shift(&offs));
                }
            }
        }
    }
    out
}

/// Argmin of `f` over `candidates ∪ {p}`. Ties keep `p`; among other tied
/// candidates the lexicographically smallest position wins, so a move needs
/// a strict improvement.
pub fn best_neighbor(p: &Candidate, candidates: &[Candidate]) -> Candidate {
    let mut best = p;
    for c in candidates {
        let replace = if c.f < best.f {
            true
        } else if c.f == best.f && !std::ptr::eq(best, p) {
            crate::domain::lex_less(&c.x, &best.x)
        } else {
            false
        };
        if replace {
            best = c;
        }
    }
    best.clone()
}

/// The complete cell holding the best labeled vertex; ties go to the
/// lexicographically first cell.
fn best_complete_cell(complete: &[Cell], labels: &[LabeledVertex]) -> Option<Cell> {
    let value: HashMap<&GridPoint, f64> = labels
        .iter()
        .map(|v| (&v.candidate.point, v.candidate.f))
        .collect();
    let score = |c: &Cell| {
        c.vertices()
            .map(|vs| vs.iter().filter_map(|v| value.get(v)).fold(f64::INFINITY, |a, &b| a.min(b)))
            .unwrap_or(f64::INFINITY)
    };
    let mut best: Option<(&Cell, f64)> = None;
    for c in complete {
        let s = score(c);
        if best.is_none_or(|(_, b)| s < b) {
            best = Some((c, s));
        }
    }
    best.map(|(c, _)| c.clone())
}

/// Objective wrapper applying the sense and one noise realization.
#[derive(Clone)]
pub(crate) struct Evaluator<'a> {
    pub obj: &'a Objective,
    pub sign: f64,
    pub noise_seed: u64,
}

impl Evaluator<'_> {
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        let v = self.obj.eval(x, self.noise_seed)?;
        if v.is_nan() {
            return Err(Error::Evaluation(format!("{} returned NaN at {x:?}", self.obj.name())));
        }
        // + 0.0 folds -0.0 into 0.0 so flat regions compare as ties
        Ok(self.sign * v + 0.0)
    }

    pub fn candidate(&self, grid: &GridSpec, p: GridPoint) -> Result<Candidate> {
        let x = grid.position_of(&p)?;
        let f = self.value(&x)?;
        Ok(Candidate { point: p, x, f })
    }
}

/// Noise key for one step: all evaluations within a step share it.
pub(crate) fn step_noise_seed(seed: u64, level: u32) -> u64 {
    let mut z = seed ^ (u64::from(level)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Probe {
    vertex: LabeledVertex,
    best_offspring: Candidate,
    evaluations: u64,
}

/// Resumable search state: one call to [`SearchState::advance`] is one level.
#[derive(Debug, Clone)]
pub struct SearchState {
    pub objective: Objective,
    pub settings: SearchSettings,
    pub grid: GridSpec,
    pub population: Vec<GridPoint>,
    pub best: Option<Candidate>,
    pub steps: Vec<StepRecord>,
    pub evaluations: u64,
    pub finished: bool,
    pub converged: bool,
}

impl SearchState {
    pub fn new(objective: Objective, settings: SearchSettings) -> Result<Self> {
        settings.validate(&objective)?;
        let dim = objective.dim();
        let population = if settings.reduced(dim) {
            let lo = GridPoint::new(vec![0; dim], 1);
            let hi = GridPoint::new(vec![1; dim], 1);
            vec![lo, hi]
        } else {
            initial_corners(dim)?
        };
        let grid = GridSpec::new(objective.domain().clone(), 1)?;
        Ok(Self {
            objective,
            settings,
            grid,
            population,
            best: None,
            steps: Vec::new(),
            evaluations: 0,
            finished: false,
            converged: false,
        })
    }

    pub fn level(&self) -> u32 {
        self.grid.level()
    }

    fn evaluator(&self) -> Evaluator<'_> {
        Evaluator {
            obj: &self.objective,
            sign: match self.settings.sense {
                Sense::Minimize => 1.0,
                Sense::Maximize => -1.0,
            },
            noise_seed: step_noise_seed(self.settings.seed, self.level()),
        }
    }

    fn probe(&self, eval: &Evaluator<'_>, fine: &GridSpec, member: &Candidate) -> Result<Probe> {
        let p = member.point.refine();
        let own = Candidate {
            point: p.clone(),
            x: member.x.clone(),
            f: member.f,
        };
        let mut offspring = Vec::new();
        for q in neighbor_points(&p, self.settings.scheme, fine.max_index()) {
            offspring.push(eval.candidate(fine, q)?);
        }
        if self.settings.scheme == NeighborScheme::Coordinatewise {
            if let Some(c) = composite_move(&own, &offspring) {
                if !offspring.iter().any(|o| o.point == c) {
                    offspring.push(eval.candidate(fine, c)?);
                }
            }
        }
        let evaluations = offspring.len() as u64;
        let best_offspring = best_neighbor(&own, &offspring);
        let delta = labeling::delta_of(&own, &best_offspring)?;
        let rule = self.settings.label_rule;
        let label_delta = match rule.variant {
            LabelVariant::BestNeighbor => delta.clone(),
            LabelVariant::GradientFixedPoint => match self
                .objective
                .gradient(&member.x)
                .and_then(|g| labeling::gradient_delta(&member.x, &g))
            {
                Ok(g) => g.iter().map(|v| v * eval.sign).collect(),
                Err(_) => delta.clone(),
            },
        };
        let label = labeling::label_from_delta(&label_delta, &rule)?;
        Ok(Probe {
            vertex: LabeledVertex {
                candidate: member.clone(),
                label,
                delta: label_delta,
            },
            best_offspring,
            evaluations,
        })
    }

    /// Run one level. No-op once finished.
    pub fn advance(&mut self) -> Result<()> {
        if self.finished {
            return Ok(());
        }
        let eval = self.evaluator();
        let level = self.level();
        let fine = self.grid.refined()?;

        let members: Vec<Candidate> = self
            .population
            .par_iter()
            .map(|p| eval.candidate(&self.grid, p.clone()))
            .collect::<Result<_>>()?;
        let mut evaluations = members.len() as u64;

        let mut order: Vec<usize> = (0..members.len()).collect();
        order.sort_by(|&a, &b| {
            if members[a].better_than(&members[b]) {
                std::cmp::Ordering::Less
            } else if members[b].better_than(&members[a]) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        let selected = ((self.settings.mutation_rate * members.len() as f64).ceil() as usize)
            .clamp(1, members.len());
        let mut chosen_idx: Vec<usize> = order[..selected].to_vec();
        chosen_idx.sort_unstable();

        let probes: Vec<Probe> = chosen_idx
            .par_iter()
            .map(|&i| self.probe(&eval, &fine, &members[i]))
            .collect::<Result<_>>()?;
        evaluations += probes.iter().map(|p| p.evaluations).sum::<u64>();

        let mut best = self.best.clone();
        let step_pool = members.iter().chain(probes.iter().map(|p| &p.best_offspring));
        for c in step_pool {
            if best.as_ref().is_none_or(|b| c.f < b.f) {
                best = Some(c.clone());
            }
        }
        let best = best.expect("population is never empty");

        let labels: Vec<LabeledVertex> = probes.into_iter().map(|p| p.vertex).collect();
        let best_fine = best.point.refine_by(fine.level() - best.point.level);
        let reduced = self.settings.reduced(self.objective.dim());
        let chosen = if reduced {
            Cell::first_containing(&best_fine, level)
        } else {
            let complete = labeling::find_complete_cells(&labels, level);
            if complete.is_empty() {
                Cell::first_containing(&best_fine, level)
            } else {
                best_complete_cell(&complete, &labels)
            }
        }
        .ok_or_else(|| Error::InvalidCell("best point lies in no cell".into()))?;

        let mut next: Vec<GridPoint> = if reduced {
            let center = GridPoint::new(chosen.anchor.k.iter().map(|&k| 2 * k + 1).collect(), fine.level());
            vec![best_fine.clone(), center]
        } else {
            let mut lattice = chosen.refined_lattice();
            lattice.push(best_fine.clone());
            lattice
        };
        next.sort();
        next.dedup();

        self.evaluations += evaluations;
        self.steps.push(StepRecord {
            level,
            h: self.grid.step().to_vec(),
            population: members,
            labels,
            chosen_cell: Some(chosen),
            best: best.clone(),
            evaluations,
        });
        self.best = Some(best);
        self.population = next;

        let below_tol = self.grid.step().iter().all(|&h| h < self.settings.h_tol);
        self.grid = fine;
        if below_tol {
            self.finished = true;
            self.converged = true;
        } else if level >= self.settings.max_levels {
            self.finished = true;
        }
        Ok(())
    }

    pub fn run_to_end(mut self) -> Result<RunReport> {
        while !self.finished {
            self.advance()?;
        }
        Ok(self.into_report())
    }

    pub fn into_report(self) -> RunReport {
        let sign = match self.settings.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let fix = |c: &mut Candidate| c.f = sign * c.f + 0.0;
        let mut steps = self.steps;
        if sign < 0.0 {
            for s in &mut steps {
                s.population.iter_mut().for_each(fix);
                s.labels.iter_mut().for_each(|v| fix(&mut v.candidate));
                fix(&mut s.best);
            }
        }
        let mut best = self.best.expect("run has at least one step");
        fix(&mut best);
        let mut params = self.settings.describe();
        params.push(("objective".into(), self.objective.name().to_string()));
        RunReport {
            algorithm: self.settings.algorithm.clone(),
            objective: self.objective.name().to_string(),
            params,
            steps,
            best,
            evaluations: self.evaluations,
            converged: self.converged,
        }
    }
}

/// Combine the improving axis moves (relative to `own`) into one point.
fn composite_move(own: &Candidate, offspring: &[Candidate]) -> Option<GridPoint> {
    let n = own.point.dim();
    let mut k = own.point.k.clone();
    let mut moved = 0;
    for d in 0..n {
        let best_along = offspring
            .iter()
            .filter(|o| {
                o.point
                    .k
                    .iter()
                    .enumerate()
                    .all(|(e, &v)| e == d || v == own.point.k[e])
            })
            .filter(|o| o.f < own.f)
            .min_by(|a, b| a.f.total_cmp(&b.f));
        if let Some(o) = best_along {
            k[d] = o.point.k[d];
            moved += 1;
        }
    }
    (moved > 1).then(|| GridPoint::new(k, own.point.level))
}
