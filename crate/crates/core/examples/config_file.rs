//! Experiments described in an INI file, one per section.

use subgrid::harness::{emit_table, parse_config, run_experiment};

const CONFIG: &str = "
trials = 3
seed = 7

[gp]
function = goldstein-price
algo = slm

[rosenbrock]
function = f2
algo = slmga
h_tol = 0.05
format = csv

[ring]
expr = (sqrt(x1^2 + x2^2) - 1)^2
lower = -2
upper = 2
dim = 2
algo = de
budget = 100
";

fn main() -> subgrid::Result<()> {
    for exp in parse_config(CONFIG)? {
        let r = run_experiment(&exp)?;
        println!("== {} ({} trials): BV {} median {}", exp.name, exp.trials, r.metrics.bv, r.metrics.bv_median);
        print!("{}", emit_table(std::slice::from_ref(r.best_report()), exp.format)?);
    }
    Ok(())
}
