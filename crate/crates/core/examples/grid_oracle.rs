//! Engine levels against exhaustive grid minima on two-dimensional
//! objectives.

use subgrid::harness::brute_force_grid_min;
use subgrid::{slm_run, Objective, SlmConfig};

fn main() -> subgrid::Result<()> {
    for f in [Objective::goldstein_price(), Objective::easom(), Objective::dejong_f5()] {
        let r = slm_run(&f, &SlmConfig { h_tol: 1e-9, max_levels: 6, ..SlmConfig::default() })?;
        println!("{}", f.name());
        for s in &r.steps {
            // step g evaluates points of the level g+1 grid
            let oracle = brute_force_grid_min(&f, f.domain(), s.level + 1)?;
            println!(
                "  level {}: engine {:<22} oracle {:<22} at {:?}",
                s.level, s.best.f, oracle.f, oracle.x
            );
        }
    }
    Ok(())
}
