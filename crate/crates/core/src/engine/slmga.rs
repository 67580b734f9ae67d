//! Genetic formulation of subdivision labeling.
//!
//! The population is a set of crossing points of the current grid. Mutation
//! replaces a member by the best of `x + α`, `α ∈ {0, ±h_{g+1}}^n`, selection
//! is fitness plus the integer labeling, and the completely labeled cell
//! holding the best point is subdivided to seed the next generation. The
//! mutation size halves every generation.

use serde::{Deserialize, Serialize};

use super::{
    best_neighbor, initial_corners, neighbor_points, Evaluator, NeighborScheme, PopulationMode,
    SearchSettings, SearchState, Sense,
};
use crate::domain::{Candidate, GridPoint, GridSpec, RunReport};
use crate::error::{Error, Result};
use crate::functions::Objective;
use crate::labeling::LabelRule;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub label_rule: LabelRule,
    /// Fraction of the population mutated each generation, fittest first.
    pub mutation_rate: f64,
    pub h_tol: f64,
    pub max_generations: u32,
    pub seed: u64,
    pub population: PopulationMode,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            label_rule: LabelRule::default(),
            mutation_rate: 1.0,
            h_tol: 1e-4,
            max_generations: 40,
            seed: 0,
            population: PopulationMode::Auto,
        }
    }
}

impl GaConfig {
    pub fn settings(&self, dim: usize) -> SearchSettings {
        let mut s = SearchSettings {
            algorithm: "slmga".into(),
            scheme: NeighborScheme::FullBox,
            label_rule: self.label_rule,
            h_tol: self.h_tol,
            max_levels: self.max_generations,
            mutation_rate: self.mutation_rate,
            sense: Sense::Minimize,
            population: self.population,
            seed: self.seed,
        };
        if s.reduced(dim) {
            s.scheme = NeighborScheme::Coordinatewise;
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub members: Vec<Candidate>,
    pub generation: u32,
}

/// Generation 0: the `2^n` box corners, evaluated.
pub fn init_population(f: &Objective) -> Result<Population> {
    let grid = GridSpec::new(f.domain().clone(), 1)?;
    let eval = Evaluator {
        obj: f,
        sign: 1.0,
        noise_seed: 0,
    };
    let members = initial_corners(f.dim())?
        .into_iter()
        .map(|p| eval.candidate(&grid, p))
        .collect::<Result<_>>()?;
    Ok(Population {
        members,
        generation: 0,
    })
}

/// All in-box offspring `p + α`, `α ∈ {0, ±h_next}^n`, with `p` itself
/// first. `grid` is the grid `p` lives on; offspring sit one level finer.
pub fn mutate(f: &Objective, p: &Candidate, grid: &GridSpec, noise_seed: u64) -> Result<Vec<Candidate>> {
    if p.point.level != grid.level() {
        return Err(Error::InvalidGridPoint(format!(
            "candidate at level {} used with grid at level {}",
            p.point.level,
            grid.level()
        )));
    }
    let fine = grid.refined()?;
    let eval = Evaluator {
        obj: f,
        sign: 1.0,
        noise_seed,
    };
    let own = p.point.refine();
    let mut out = vec![Candidate {
        point: own.clone(),
        x: p.x.clone(),
        f: p.f,
    }];
    for q in neighbor_points(&own, NeighborScheme::FullBox, fine.max_index()) {
        out.push(eval.candidate(&fine, q)?);
    }
    Ok(out)
}

/// The surviving (best) offspring of [`mutate`].
pub fn best_mutant(offspring: &[Candidate]) -> Candidate {
    best_neighbor(&offspring[0], &offspring[1..])
}

pub fn ga_init(f: &Objective, cfg: &GaConfig) -> Result<SearchState> {
    SearchState::new(f.clone(), cfg.settings(f.dim()))
}

pub fn ga_generation(mut state: SearchState) -> Result<SearchState> {
    state.advance()?;
    Ok(state)
}

pub fn ga_run(f: &Objective, cfg: &GaConfig) -> Result<RunReport> {
    ga_init(f, cfg)?.run_to_end()
}

/// Lattice points of the population at the start of generation `g` are
/// grid points of level `g`; this is the matching grid.
pub fn generation_grid(f: &Objective, generation: u32) -> Result<GridSpec> {
    GridSpec::new(f.domain().clone(), generation.max(1))
}

/// Members as grid points, for callers that drive generations by hand.
pub fn population_points(state: &SearchState) -> &[GridPoint] {
    &state.population
}
