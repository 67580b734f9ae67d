//! The genetic formulation on De Jong's F1..F5 with the usual stopping
//! steps, as a Markdown table.

use subgrid::harness::experiment::OutputFormat;
use subgrid::harness::suite::dejong_suite;
use subgrid::harness::{emit_table, run_experiment};

fn main() -> subgrid::Result<()> {
    let mut reports = Vec::new();
    for cfg in dejong_suite() {
        let r = run_experiment(&cfg)?;
        let m = &r.metrics;
        eprintln!(
            "{}: {} generations, BV {}, SD {:?}",
            cfg.name, m.generations, m.bv, m.sd_euclid
        );
        reports.push(r.best_report().clone());
    }
    print!("{}", emit_table(&reports, OutputFormat::Markdown)?);

    // F4 is noisy; its deterministic part tells whether the origin was hit.
    let f4 = subgrid::Objective::dejong_f4();
    let x = &reports[3].best.x;
    println!("\nF4 noiseless value at the best point: {}", f4.noiseless().eval(x, 0)?);
    Ok(())
}
