//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subgrid::baselines::{run_baseline, BaselineAlgo, BaselineConfig};
use subgrid::domain::{Candidate, GridPoint, GridSpec};
use subgrid::engine::best_neighbor;
use subgrid::functions::finite_difference_gradient;
use subgrid::harness::experiment::OutputFormat;
use subgrid::harness::suite::{dejong_suite, easom_annealing, EASOM_START, REPORTED_GENERATIONS, REPORTED_PNG};
use subgrid::harness::{brute_force_grid_min, emit_table, png_ratio, run_experiment};
use subgrid::labeling::{is_complete, label_from_delta};
use subgrid::{ga_run, slm_run, GaConfig, LabelRule, Objective, RunReport, SlmConfig};

type Outcome = Result<String, String>;

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn dejong(name: &str) -> RunReport {
    let cfg = dejong_suite().into_iter().find(|c| c.name == name).expect("preset exists");
    run_experiment(&cfg).expect("preset runs").best_report().clone()
}

/// Every (point, best offspring, printed label) row of the four traces.
fn labeling_tables() -> Outcome {
    let rows: [([f64; 2], [f64; 2], usize); 18] = [
        ([-2.0, -2.0], [0.0, -2.0], 0),
        ([2.0, 2.0], [0.0, 0.0], 2),
        ([-2.0, 2.0], [0.0, 0.0], 2),
        ([2.0, -2.0], [0.0, -2.0], 1),
        ([-100.0, -100.0], [0.0, 0.0], 0),
        ([100.0, 100.0], [0.0, 0.0], 2),
        ([-100.0, 100.0], [0.0, 0.0], 2),
        ([100.0, -100.0], [0.0, 0.0], 1),
        ([-100.0, 0.0], [-50.0, 0.0], 0),
        ([0.0, -100.0], [0.0, -50.0], 0),
        ([100.0, 0.0], [50.0, 0.0], 1),
        ([0.0, 100.0], [0.0, 50.0], 2),
        ([0.0, 0.0], [0.0, 0.0], 0),
        ([0.0, 50.0], [0.0, 25.0], 2),
        ([50.0, 0.0], [25.0, 0.0], 1),
        ([50.0, 50.0], [25.0, 25.0], 2),
        ([50.0, 100.0], [25.0, 75.0], 2),
        ([100.0, 50.0], [75.0, 25.0], 2),
    ];
    let rule = LabelRule::default();
    let mut wrong = Vec::new();
    for (x, c, want) in rows {
        let d = [c[0] - x[0], c[1] - x[1]];
        let got = label_from_delta(&d, &rule).map_err(|e| e.to_string())?;
        if got != want {
            wrong.push(format!("{x:?}: {got} != {want}"));
        }
    }
    let sets = is_complete(&[0, 1, 2], 2)
        && is_complete(&[0, 1, 2, 3], 3)
        && is_complete(&(0..=7).collect::<Vec<_>>(), 7)
        && !is_complete(&[0, 0, 2, 2], 2);

    // The engine's own first Easom level must produce the printed labels.
    let easom = slm_run(&Objective::easom(), &SlmConfig { max_levels: 1, ..SlmConfig::default() })
        .map_err(|e| e.to_string())?;
    let mut first: Vec<(Vec<f64>, usize)> =
        easom.steps[0].labels.iter().map(|v| (v.candidate.x.clone(), v.label)).collect();
    first.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
    let engine_ok = first.iter().map(|p| p.1).collect::<Vec<_>>() == vec![0, 2, 1, 2];
    check(
        wrong.is_empty() && sets && engine_ok,
        format!(
            "{} trace rows, mismatches {wrong:?}, complete sets {sets}, engine easom level 1 {engine_ok}",
            rows.len()
        ),
    )
}

fn f1_schedule() -> Outcome {
    let r = dejong("f1");
    let h = r.final_step().map(|s| s.h[0]).unwrap_or(f64::NAN);
    check(
        r.generations() == 18 && r.best.x == vec![0.0; 3] && r.best.f == 0.0 && h == 0.000078125,
        format!("generations {}, best {:?}, BV {}, final step {h}", r.generations(), r.best.x, r.best.f),
    )
}

fn f2_schedule() -> Outcome {
    let r = dejong("f2");
    let h = r.final_step().map(|s| s.h[0]).unwrap_or(f64::NAN);
    let d = dist(&r.best.x, &[1.0, 1.0]);
    check(
        r.generations() == 8 && (h - 0.032).abs() < 1e-12 && d <= 0.04 && r.best.f <= 0.01,
        format!(
            "generations {}, final step {h}, best {:?} at distance {d:.4} from (1,1) (need <= 0.04), BV {:.6}",
            r.generations(),
            r.best.x,
            r.best.f
        ),
    )
}

fn f3_plateau() -> Outcome {
    let r = dejong("f3");
    let inside = r.best.x.iter().all(|&v| (-5.12..-5.0).contains(&v));
    check(
        r.best.f == 0.0 && inside && r.generations() <= 10,
        format!("generations {}, best {:?}, BV {}", r.generations(), r.best.x, r.best.f),
    )
}

fn f5_foxholes() -> Outcome {
    let r = dejong("f5");
    let d = dist(&r.best.x, &[-32.256, -32.256]);
    let at_corner = Objective::dejong_f5().eval(&[-32.0, -32.0], 0).map_err(|e| e.to_string())?;
    check(
        r.generations() <= 9 && d <= 0.5 && (r.best.f - 1.000024).abs() <= 0.01 && (at_corner - 0.998004).abs() <= 1e-5,
        format!(
            "generations {}, best {:?} ({d:.3} from (-32.256,-32.256)), BV {:.6}, f5(-32,-32) = {at_corner:.6}",
            r.generations(),
            r.best.x,
            r.best.f
        ),
    )
}

fn easom_and_goldstein_price() -> Outcome {
    let f = Objective::easom();
    let r = slm_run(&f, &SlmConfig { max_levels: 11, h_tol: 1e-6, ..SlmConfig::default() }).map_err(|e| e.to_string())?;
    let cell = 200.0 / 1024.0;
    let easom_ok = r.generations() == 11 && r.best.x.iter().all(|&v| (v - 3.3203125).abs() <= cell);
    let gp = slm_run(&Objective::goldstein_price(), &SlmConfig::default()).map_err(|e| e.to_string())?;
    let gp_ok = (gp.best.f - 3.0).abs() <= 1e-3 && dist(&gp.best.x, &[0.0, -1.0]) < 1e-9;
    check(
        easom_ok && gp_ok,
        format!(
            "easom {} levels best {:?} (cell {cell}); goldstein-price best {:?} f={}",
            r.generations(),
            r.best.x,
            gp.best.x,
            gp.best.f
        ),
    )
}

fn f4_noise() -> Outcome {
    let f = Objective::dejong_f4();
    let clean = f.noiseless();
    let mut worst = 0.0f64;
    let mut gens = 0;
    for seed in 0..5 {
        let r = ga_run(&f, &GaConfig { h_tol: 1e-4, seed, ..GaConfig::default() }).map_err(|e| e.to_string())?;
        worst = worst.max(clean.eval(&r.best.x, 0).map_err(|e| e.to_string())?);
        gens = gens.max(r.generations());
    }
    let origin = vec![0.0; 30];
    let mut sum = 0.0;
    for s in 0..10_000u64 {
        sum += f.eval(&origin, s).map_err(|e| e.to_string())?;
    }
    let mean = sum / 10_000.0;
    check(
        worst == 0.0 && gens <= 16 && mean.abs() < 0.5,
        format!("5 seeds: worst noiseless value {worst}, max generations {gens}; noise mean at origin {mean:.4}"),
    )
}

fn png_row() -> Outcome {
    let mut ours = Vec::new();
    for name in ["f1", "f2", "f3", "f4", "f5"] {
        ours.push(dejong(name).generations() as u32);
    }
    let png: Vec<f64> = REPORTED_GENERATIONS[4]
        .1
        .iter()
        .zip(&ours)
        .map(|(&de, &g)| png_ratio(de, g).round())
        .collect();
    let ok = png.iter().zip(REPORTED_PNG).all(|(&a, b)| (a - f64::from(b)).abs() <= 1.0);
    check(ok, format!("generations {ours:?}, PNG {png:?} vs {REPORTED_PNG:?}"))
}

fn gradient_agreement() -> Result<f64, String> {
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for f in [
        Objective::dejong_f1(),
        Objective::dejong_f2(),
        Objective::dejong_f5(),
        Objective::goldstein_price(),
        Objective::easom(),
    ] {
        let d = f.domain();
        for _ in 0..100 {
            let x: Vec<f64> = (0..f.dim())
                .map(|i| {
                    let pad = 0.01 * d.width(i);
                    rng.random_range(d.lower()[i] + pad..d.upper()[i] - pad)
                })
                .collect();
            let g = f.gradient(&x).map_err(|e| e.to_string())?;
            let fd = finite_difference_gradient(&f, &x).map_err(|e| e.to_string())?;
            let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if scale < 1e-200 {
                continue;
            }
            let err = g.iter().zip(&fd).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale;
            worst = worst.max(err);
        }
    }
    Ok(worst)
}

fn monotone_invariance() -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let rule = LabelRule::default();
    let phi = |v: f64| (v / 10.0).tanh() * 3.0 + v.cbrt();
    let mut bad = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..6usize);
        let p = GridPoint::new(vec![0; n], 1);
        let own = Candidate { point: p.clone(), x: vec![0.0; n], f: rng.random_range(-5.0..5.0) };
        let others: Vec<Candidate> = (0..6)
            .map(|_| Candidate {
                point: p.clone(),
                x: (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
                f: rng.random_range(-5.0..5.0),
            })
            .collect();
        let warp = |c: &Candidate| Candidate { f: phi(c.f), ..c.clone() };
        let a = best_neighbor(&own, &others);
        let b = best_neighbor(&warp(&own), &others.iter().map(warp).collect::<Vec<_>>());
        let la = label_from_delta(&a.x, &rule).expect("finite");
        let lb = label_from_delta(&b.x, &rule).expect("finite");
        let scale: f64 = rng.random_range(0.001..1000.0);
        let scaled: Vec<f64> = a.x.iter().map(|v| v * scale).collect();
        let lc = label_from_delta(&scaled, &rule).expect("finite");
        if a.x != b.x || la != lb || la != lc {
            bad += 1;
        }
    }
    bad
}

/// Every step's best lies on, and is bounded below by, the grid one level
/// finer; when the chosen cell holds that grid's argmin, the next step
/// reaches it.
fn oracle_equivalence() -> Result<String, String> {
    let mut equalities = 0;
    for f in [
        Objective::goldstein_price(),
        Objective::easom(),
        Objective::dejong_f2(),
        Objective::dejong_f5(),
    ] {
        let r = slm_run(&f, &SlmConfig { h_tol: 1e-9, max_levels: 6, ..SlmConfig::default() })
            .map_err(|e| e.to_string())?;
        for (g, s) in r.steps.iter().enumerate() {
            let oracle = brute_force_grid_min(&f, f.domain(), s.level + 1).map_err(|e| e.to_string())?;
            let grid = GridSpec::new(f.domain().clone(), s.level + 1).map_err(|e| e.to_string())?;
            if grid.index_of(&s.best.x).is_none() {
                return Err(format!("{} level {}: best off the grid", f.name(), s.level));
            }
            if s.best.f < oracle.f {
                return Err(format!("{} level {}: engine {} below oracle {}", f.name(), s.level, s.best.f, oracle.f));
            }
            let holds = s.chosen_cell.as_ref().is_some_and(|c| c.contains(&oracle.point));
            if let (true, Some(next)) = (holds, r.steps.get(g + 1)) {
                if next.best.f > oracle.f {
                    return Err(format!("{} level {}: argmin in chosen cell but not reached", f.name(), s.level));
                }
                equalities += 1;
            }
        }
    }
    Ok(format!("{equalities} argmin-in-cell cases reached"))
}

fn csv_determinism() -> Result<bool, String> {
    let runs = || -> Result<String, String> {
        let mut reports = vec![
            ga_run(&Objective::dejong_f4(), &GaConfig { h_tol: 1e-2, seed: 3, ..GaConfig::default() })
                .map_err(|e| e.to_string())?,
        ];
        for algo in [BaselineAlgo::Rs, BaselineAlgo::Sa, BaselineAlgo::De] {
            reports.push(run_baseline(&Objective::dejong_f1(), &BaselineConfig::new(algo, 40, 9)).map_err(|e| e.to_string())?);
        }
        emit_table(&reports, OutputFormat::Csv).map_err(|e| e.to_string())
    };
    Ok(runs()? == runs()?)
}

fn property_suites() -> Outcome {
    let grad = gradient_agreement()?;
    let bad = monotone_invariance();
    let oracle = oracle_equivalence();
    let same = csv_determinism()?;
    let msg = format!(
        "gradient max relative error {grad:.2e}; monotone mismatches {bad}/1000; oracle {}; identical CSV {same}",
        match &oracle {
            Ok(s) => s.clone(),
            Err(e) => format!("FAILED {e}"),
        }
    );
    check(grad <= 1e-5 && bad == 0 && oracle.is_ok() && same, msg)
}

fn baselines() -> Outcome {
    let near_pi = |x: &[f64]| dist(x, &[PI, PI]) <= 0.2;
    let f1 = Objective::dejong_f1();
    let de = (0..50)
        .filter(|&seed| {
            run_baseline(&f1, &BaselineConfig::new(BaselineAlgo::De, 260, seed))
                .map(|r| r.best.f < 1e-6)
                .unwrap_or(false)
        })
        .count();
    let easom = Objective::easom();
    let sa = (0..50)
        .filter(|&seed| {
            run_baseline(&easom, &BaselineConfig { seed, ..easom_annealing(1200) })
                .map(|r| near_pi(&r.steps.last().expect("nonempty").population[0].x))
                .unwrap_or(false)
        })
        .count();
    let rsw_cfg = BaselineConfig::new(BaselineAlgo::Rsw, 700, 0).with_initial(EASOM_START.to_vec());
    let rsw = (0..50)
        .filter(|&seed| {
            run_baseline(&easom, &BaselineConfig { seed, ..rsw_cfg.clone() })
                .map(|r| near_pi(&r.best.x))
                .unwrap_or(false)
        })
        .count();
    check(
        de >= 45 && sa > 25 && rsw > 25,
        format!("DE on F1 {de}/50 below 1e-6; SA on Easom {sa}/50 and RSW {rsw}/50 within 0.2 of (pi,pi)"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("labeling tables", labeling_tables),
        ("f1 schedule", f1_schedule),
        ("f2 schedule", f2_schedule),
        ("f3 plateau", f3_plateau),
        ("f5 foxholes", f5_foxholes),
        ("easom and goldstein-price", easom_and_goldstein_price),
        ("f4 noise", f4_noise),
        ("png row", png_row),
        ("property suites", property_suites),
        ("baselines", baselines),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(msg) => println!("criterion {:>2} PASS {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
