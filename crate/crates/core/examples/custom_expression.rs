//! Objectives written as expressions over x1..xn, including maximization.

use subgrid::engine::Sense;
use subgrid::expr::Expr;
use subgrid::{ga_run, slm_run, BoxDomain, GaConfig, Objective, SlmConfig};

fn main() -> subgrid::Result<()> {
    let e = Expr::parse("-cos(x1)*cos(x2)*exp(-((x1-3.14159)^2 + (x2-3.14159)^2))", 2)?;
    println!("parsed: {e}");
    println!("value at (3, 3): {}", e.eval(&[3.0, 3.0])?);

    let bowl = Objective::from_expr("(x1 - 0.75)^2 + 2*(x2 + 0.5)^2 + abs(x3)", BoxDomain::cube(-2.0, 2.0, 3)?)?;
    let r = ga_run(&bowl, &GaConfig { h_tol: 1e-3, ..GaConfig::default() })?;
    println!("bowl: {:?} f={} after {} generations", r.best.x, r.best.f, r.generations());

    let hill = Objective::from_expr("4 - (x1 - 1)^2 - (x2 - 2)^2", BoxDomain::new(vec![-4.0, -4.0], vec![4.0, 4.0])?)?;
    let cfg = SlmConfig {
        h_tol: 1e-3,
        objective_sense: Sense::Maximize,
        ..SlmConfig::default()
    };
    let r = slm_run(&hill, &cfg)?;
    println!("hill top: {:?} f={}", r.best.x, r.best.f);

    match Expr::parse("x1 + tan(x2)", 2) {
        Err(err) => println!("rejected: {err}"),
        Ok(_) => unreachable!("tan is not in the function table"),
    }
    Ok(())
}
