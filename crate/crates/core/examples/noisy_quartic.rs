//! F4: 30-dimensional quartic with Gaussian noise. Runs use a reduced
//! population in high dimension and share one noise draw per generation.

use subgrid::{ga_run, GaConfig, Objective};

fn main() -> subgrid::Result<()> {
    let f4 = Objective::dejong_f4();
    let clean = f4.noiseless();
    for seed in 0..5 {
        let r = ga_run(&f4, &GaConfig { h_tol: 1e-4, seed, ..GaConfig::default() })?;
        println!(
            "seed {seed}: {} generations, {} evaluations, noisy BV {:.3}, noiseless {}",
            r.generations(),
            r.evaluations,
            r.best.f,
            clean.eval(&r.best.x, 0)?
        );
    }
    let origin = vec![0.0; 30];
    let mean = (0..10_000u64).map(|s| f4.eval(&origin, s).unwrap()).sum::<f64>() / 10_000.0;
    println!("mean noisy value at the origin over 10^4 draws: {mean:.4}");
    Ok(())
}
