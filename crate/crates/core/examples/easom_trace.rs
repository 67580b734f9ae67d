//! Serial subdivision labeling on Easom, printed level by level, with an
//! SVG of the nested cells.
//!
//! ```text
//! cargo run --example easom_trace -- easom.svg
//! ```

use subgrid::harness::emit_trace_svg;
use subgrid::{slm_run, Objective, SlmConfig};

fn main() -> subgrid::Result<()> {
    let f = Objective::easom();
    let cfg = SlmConfig {
        max_levels: 11,
        h_tol: 1e-6,
        ..SlmConfig::default()
    };
    let report = slm_run(&f, &cfg)?;
    for s in &report.steps {
        let cell = s.chosen_cell.as_ref().map(|c| c.anchor.k.clone());
        println!(
            "level {:>2}  h {:<12} labels {:?}  best {:?} f={:.6}  cell {:?}",
            s.level,
            s.h[0],
            s.label_multiset(),
            s.best.x,
            s.best.f,
            cell
        );
    }
    println!("{} evaluations, best {:?}", report.evaluations, report.best.x);

    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, emit_trace_svg(&report, &f)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
