//! Random search, random walk, simulated annealing and differential
//! evolution over 50 seeds each.

use std::f64::consts::PI;

use subgrid::baselines::{run_baseline, BaselineAlgo, BaselineConfig};
use subgrid::harness::suite::{easom_annealing, EASOM_START};
use subgrid::Objective;

fn success(f: &Objective, cfg: &BaselineConfig, hit: impl Fn(&subgrid::RunReport) -> bool) -> usize {
    (0..50)
        .filter(|&seed| {
            let r = run_baseline(f, &BaselineConfig { seed, ..cfg.clone() }).expect("valid config");
            hit(&r)
        })
        .count()
}

fn main() {
    let easom = Objective::easom();
    let near_pi = |x: &[f64]| ((x[0] - PI).powi(2) + (x[1] - PI).powi(2)).sqrt() <= 0.2;

    let rs = BaselineConfig::new(BaselineAlgo::Rs, 1500, 0);
    let rsw = BaselineConfig::new(BaselineAlgo::Rsw, 700, 0).with_initial(EASOM_START.to_vec());
    let sa = easom_annealing(1200);
    println!("Easom, runs ending within 0.2 of (pi, pi) out of 50:");
    println!("  RS  1500 evals: {}", success(&easom, &rs, |r| near_pi(&r.best.x)));
    println!("  RSW  700 evals: {}", success(&easom, &rsw, |r| near_pi(&r.best.x)));
    println!(
        "  SA  1200 evals: {}",
        success(&easom, &sa, |r| near_pi(&r.steps.last().unwrap().population[0].x))
    );

    let f1 = Objective::dejong_f1();
    let de = BaselineConfig::new(BaselineAlgo::De, 260, 0);
    println!("F1, DE runs below 1e-6 after 260 generations: {}/50", success(&f1, &de, |r| r.best.f < 1e-6));
    println!("DE parameters: {:?}", de.describe());
}
