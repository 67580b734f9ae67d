//! Exhaustive grid minima, for checking the engines.

use rayon::prelude::*;

use crate::domain::{cells_per_side, BoxDomain, Candidate, Cell, GridPoint, GridSpec};
use crate::error::{Error, Result};
use crate::functions::Objective;

/// Largest number of grid points [`brute_force_grid_min`] will evaluate.
pub const ORACLE_LIMIT: u128 = 10_000_000;

fn best_of(a: Candidate, b: Candidate) -> Candidate {
    if b.better_than(&a) {
        b
    } else {
        a
    }
}

/// Minimum of `f` over the index ranges `lo[d]..=hi[d]` of the `level` grid.
fn scan(f: &Objective, grid: &GridSpec, lo: &[u64], hi: &[u64]) -> Result<Candidate> {
    let n = lo.len();
    let counts: Vec<u128> = lo.iter().zip(hi).map(|(a, b)| u128::from(b - a + 1)).collect();
    let total = counts.iter().try_fold(1u128, |acc, &c| acc.checked_mul(c)).unwrap_or(u128::MAX);
    if total > ORACLE_LIMIT {
        return Err(Error::GridTooLarge(total));
    }
    let level = grid.level();
    (0..total as u64)
        .into_par_iter()
        .map(|mut code| {
            let mut k = vec![0u64; n];
            for d in (0..n).rev() {
                let c = counts[d] as u64;
                k[d] = lo[d] + code % c;
                code /= c;
            }
            let p = GridPoint::new(k, level);
            let x = grid.position_of(&p)?;
            let v = f.eval(&x, 0)? + 0.0;
            Ok(Candidate { point: p, x, f: v })
        })
        .try_reduce_with(|a, b| Ok(best_of(a, b)))
        .expect("grid is never empty")
}

/// Exhaustive minimum of `f` over every crossing point of the `level` grid
/// on `domain`; ties go to the lexicographically smaller position.
pub fn brute_force_grid_min(f: &Objective, domain: &BoxDomain, level: u32) -> Result<Candidate> {
    let grid = GridSpec::new(domain.clone(), level)?;
    let n = domain.dim();
    scan(f, &grid, &vec![0; n], &vec![cells_per_side(level); n])
}

/// Exhaustive minimum over the crossing points of `level` inside `cell`.
pub fn brute_force_cell_min(f: &Objective, cell: &Cell, level: u32) -> Result<Candidate> {
    let a = &cell.anchor;
    if level < a.level {
        return Err(Error::InvalidCell(format!("level {level} is coarser than the cell")));
    }
    let grid = GridSpec::new(f.domain().clone(), level)?;
    let shift = level - a.level;
    let lo: Vec<u64> = a.k.iter().map(|&k| k << shift).collect();
    let hi: Vec<u64> = lo.iter().map(|&k| k + (1 << shift)).collect();
    scan(f, &grid, &lo, &hi)
}
