//! Generations to convergence against published figures for other
//! optimizers, and the proportion (PNG) relative to differential evolution.

use subgrid::harness::suite::{dejong_suite, REPORTED_GENERATIONS, REPORTED_PNG};
use subgrid::harness::{png_ratio, run_experiment};

fn main() -> subgrid::Result<()> {
    let mut ours = Vec::new();
    for cfg in dejong_suite() {
        ours.push(run_experiment(&cfg)?.metrics.generations as u32);
    }
    println!("{:<24}{:>8}{:>8}{:>8}{:>8}{:>8}", "", "F1", "F2", "F3", "F4", "F5");
    for (name, row) in REPORTED_GENERATIONS {
        print!("{name:<24}");
        row.iter().for_each(|v| print!("{v:>8}"));
        println!();
    }
    print!("{:<24}", "SLMGA (this run)");
    ours.iter().for_each(|v| print!("{v:>8}"));
    println!();
    print!("{:<24}", "PNG");
    for (de, g) in REPORTED_GENERATIONS[4].1.iter().zip(&ours) {
        print!("{:>8}", png_ratio(*de, *g).round());
    }
    println!();
    print!("{:<24}", "PNG (published)");
    REPORTED_PNG.iter().for_each(|v| print!("{v:>8}"));
    println!();
    Ok(())
}
