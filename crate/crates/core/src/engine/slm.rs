//! Serial subdivision labeling: corner seeding, neighbor probing at the next
//! step, labeling, complete-cell selection and halving until the step is small.

use serde::{Deserialize, Serialize};

use super::{neighbor_points, NeighborScheme, PopulationMode, SearchSettings, SearchState, Sense};
use crate::domain::{GridPoint, GridSpec, RunReport};
use crate::error::Result;
use crate::functions::Objective;
use crate::labeling::LabelRule;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlmConfig {
    /// Stop once every step component is below this.
    pub h_tol: f64,
    pub max_levels: u32,
    pub neighbor_scheme: NeighborScheme,
    pub objective_sense: Sense,
}

impl Default for SlmConfig {
    fn default() -> Self {
        Self {
            h_tol: 1e-4,
            max_levels: 40,
            neighbor_scheme: NeighborScheme::FullBox,
            objective_sense: Sense::Minimize,
        }
    }
}

impl SlmConfig {
    pub fn settings(&self) -> SearchSettings {
        SearchSettings {
            algorithm: "slm".into(),
            scheme: self.neighbor_scheme,
            label_rule: LabelRule::default(),
            h_tol: self.h_tol,
            max_levels: self.max_levels,
            mutation_rate: 1.0,
            sense: self.objective_sense,
            population: PopulationMode::Auto,
            seed: 0,
        }
    }
}

/// Probe positions around `p` at the next level's step, inside the box.
/// `grid` is the grid `p` lives on.
pub fn slm_neighbors(p: &GridPoint, grid: &GridSpec, scheme: NeighborScheme) -> Result<Vec<Vec<f64>>> {
    let fine = grid.refined()?;
    neighbor_points(&p.refine(), scheme, fine.max_index())
        .iter()
        .map(|q| fine.position_of(q))
        .collect()
}

pub fn slm_init(f: &Objective, cfg: &SlmConfig) -> Result<SearchState> {
    SearchState::new(f.clone(), cfg.settings())
}

pub fn slm_step(mut state: SearchState) -> Result<SearchState> {
    state.advance()?;
    Ok(state)
}

pub fn slm_run(f: &Objective, cfg: &SlmConfig) -> Result<RunReport> {
    slm_init(f, cfg)?.run_to_end()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{BoxDomain, Cell};
    use crate::engine::Sense;

    #[test]
    fn sign_uniform_from_corner() {
        let grid = GridSpec::new(BoxDomain::cube(-2.0, 2.0, 2).unwrap(), 1).unwrap();
        let n = slm_neighbors(&GridPoint::new(vec![0, 0], 1), &grid, NeighborScheme::SignUniform).unwrap();
        assert!(n.contains(&vec![0.0, -2.0]));
        assert!(n.contains(&vec![-2.0, 0.0]));
        assert!(n.contains(&vec![0.0, 0.0]));
        assert_eq!(n.len(), 3);
        let mid = GridSpec::new(BoxDomain::cube(-2.0, 2.0, 2).unwrap(), 2).unwrap();
        let all = slm_neighbors(&GridPoint::new(vec![1, 1], 2), &mid, NeighborScheme::SignUniform).unwrap();
        assert_eq!(all.len(), 6);
        let full = slm_neighbors(&GridPoint::new(vec![1, 1], 2), &mid, NeighborScheme::FullBox).unwrap();
        assert_eq!(full.len(), 8);
    }

    #[test]
    fn easom_first_level_matches_trace() {
        let state = slm_step(slm_init(&Objective::easom(), &SlmConfig::default()).unwrap()).unwrap();
        let step = &state.steps[0];
        let mut by_corner: Vec<(Vec<f64>, usize)> = step
            .labels
            .iter()
            .map(|v| (v.candidate.x.clone(), v.label))
            .collect();
        by_corner.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert_eq!(
            by_corner,
            vec![
                (vec![-100.0, -100.0], 0),
                (vec![-100.0, 100.0], 2),
                (vec![100.0, -100.0], 1),
                (vec![100.0, 100.0], 2),
            ]
        );
        assert_eq!(step.best.x, vec![0.0, 0.0]);
        assert_eq!(step.chosen_cell, Some(Cell::root(2)));
        assert_eq!(state.population.len(), 9);
    }

    #[test]
    fn f1_best_is_monotone() {
        let cfg = SlmConfig {
            h_tol: 1e-3,
            ..SlmConfig::default()
        };
        let r = slm_run(&Objective::dejong_f1(), &cfg).unwrap();
        for w in r.steps.windows(2) {
            assert!(w[1].best.f <= w[0].best.f);
        }
        assert_eq!(r.best.x, vec![0.0; 3]);
        assert!(r.converged);
    }

    #[test]
    fn one_dimensional_bracket_halves() {
        let b = BoxDomain::new(vec![-1.0], vec![3.0]).unwrap();
        let f = Objective::from_expr("(x1 - 0.3)^2", b).unwrap();
        let mut s = slm_init(&f, &SlmConfig::default()).unwrap();
        let mut width = 4.0;
        for _ in 0..6 {
            s = slm_step(s).unwrap();
            let cell = s.steps.last().unwrap().chosen_cell.clone().unwrap();
            let g = GridSpec::new(f.domain().clone(), cell.level()).unwrap();
            let lo = g.position_of(&cell.anchor).unwrap()[0];
            let side = g.step()[0];
            assert_eq!(side, width);
            assert!(lo <= 0.3 && 0.3 <= lo + side, "bracket [{lo}, {}]", lo + side);
            width /= 2.0;
        }
    }

    #[test]
    fn maximize_is_negated_minimize() {
        let f1 = Objective::dejong_f1();
        let neg = Objective::from_expr("-(x1^2 + x2^2 + x3^2)", f1.domain().clone()).unwrap();
        let min = slm_run(&f1, &SlmConfig { h_tol: 0.01, ..SlmConfig::default() }).unwrap();
        let max = slm_run(
            &neg,
            &SlmConfig {
                h_tol: 0.01,
                objective_sense: Sense::Maximize,
                ..SlmConfig::default()
            },
        )
        .unwrap();
        assert_eq!(min.steps.len(), max.steps.len());
        for (a, b) in min.steps.iter().zip(&max.steps) {
            assert_eq!(a.best.x, b.best.x);
            assert_eq!(a.best.f, -b.best.f + 0.0);
            assert_eq!(a.label_multiset(), b.label_multiset());
            assert_eq!(a.chosen_cell, b.chosen_cell);
        }
        assert_eq!(min.best.f, 0.0);
        assert_eq!(max.best.f, 0.0);
    }
}
