//! Driving the genetic formulation one generation at a time.

use subgrid::engine::slmga::{ga_generation, ga_init, init_population};
use subgrid::{GaConfig, Objective};

fn main() -> subgrid::Result<()> {
    let f = Objective::goldstein_price();
    let start = init_population(&f)?;
    for m in &start.members {
        println!("corner {:?} f={}", m.x, m.f);
    }
    let mut state = ga_init(&f, &GaConfig { h_tol: 1e-3, ..GaConfig::default() })?;
    while !state.finished {
        state = ga_generation(state)?;
        let s = state.steps.last().expect("one step per generation");
        println!(
            "generation {:>2}: population {:>2}, labels {:?}, best {:?} f={}",
            s.level,
            s.population.len(),
            s.label_multiset(),
            s.best.x,
            s.best.f
        );
    }
    println!("converged: {}", state.converged);
    Ok(())
}
