use proptest::prelude::*;
use subgrid::harness::experiment::OutputFormat;
use subgrid::harness::{brute_force_grid_min, emit_table, parse_csv};
use subgrid::labeling::label_from_delta;
use subgrid::{
    ga_run, run_baseline, slm_run, BaselineAlgo, BaselineConfig, BoxDomain, GaConfig, LabelRule, Objective,
    SlmConfig,
};

fn gp_domain() -> BoxDomain {
    BoxDomain::new(vec![-2.0, -2.0], vec![2.0, 2.0]).unwrap()
}

// A strictly increasing transform of the objective must not move the engine.
#[test]
fn log_goldstein_price_follows_the_same_path() {
    let src = "(1 + (x1 + x2 + 1)^2 * (19 - 14*x1 + 3*x1^2 - 14*x2 + 6*x1*x2 + 3*x2^2)) \
               * (30 + (2*x1 - 3*x2)^2 * (18 - 32*x1 + 12*x1^2 + 48*x2 - 36*x1*x2 + 27*x2^2))";
    let plain = Objective::from_expr(src, gp_domain()).unwrap();
    let logged = Objective::from_expr(&format!("log({src})"), gp_domain()).unwrap();
    let cfg = SlmConfig { max_levels: 12, ..SlmConfig::default() };
    let a = slm_run(&plain, &cfg).unwrap();
    let b = slm_run(&logged, &cfg).unwrap();
    assert_eq!(a.steps.len(), b.steps.len());
    for (s, t) in a.steps.iter().zip(&b.steps) {
        assert_eq!(s.best.x, t.best.x);
        assert_eq!(s.label_multiset(), t.label_multiset());
        assert_eq!(s.chosen_cell, t.chosen_cell);
    }
    assert!((a.best.f - 3.0).abs() < 1e-9);
}

#[test]
fn expression_matches_builtin_rosenbrock() {
    let d = BoxDomain::new(vec![-2.048; 2], vec![2.048; 2]).unwrap();
    let e = Objective::from_expr("100*(x1^2 - x2)^2 + (1 - x1)^2", d).unwrap();
    let f = Objective::dejong_f2();
    let cfg = GaConfig { h_tol: 0.05, ..GaConfig::default() };
    let (a, b) = (ga_run(&e, &cfg).unwrap(), ga_run(&f, &cfg).unwrap());
    assert_eq!(a.best.x, b.best.x);
    assert_eq!(a.generations(), b.generations());
}

#[test]
fn grid_oracle_lower_bounds_every_level() {
    let f = Objective::easom();
    let r = slm_run(&f, &SlmConfig { max_levels: 6, h_tol: 1e-9, ..SlmConfig::default() }).unwrap();
    for s in &r.steps {
        let o = brute_force_grid_min(&f, f.domain(), s.level + 1).unwrap();
        assert!(s.best.f >= o.f, "level {}", s.level);
    }
}

#[test]
fn csv_is_byte_identical_across_runs_and_parses_back() {
    let emit = || {
        let r = ga_run(&Objective::dejong_f4(), &GaConfig { seed: 11, h_tol: 1e-2, ..GaConfig::default() }).unwrap();
        emit_table(&[r], OutputFormat::Csv).unwrap()
    };
    let (a, b) = (emit(), emit());
    assert_eq!(a, b);
    let rows = parse_csv(&a).unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.best_x.len() == 30));
}

#[test]
fn different_noise_seeds_differ_on_f4() {
    let f = Objective::dejong_f4();
    let x = vec![0.1; 30];
    assert_ne!(f.eval(&x, 1).unwrap(), f.eval(&x, 2).unwrap());
    assert_eq!(f.eval(&x, 1).unwrap(), f.eval(&x, 1).unwrap());
}

fn algo() -> impl Strategy<Value = BaselineAlgo> {
    prop_oneof![
        Just(BaselineAlgo::Rs),
        Just(BaselineAlgo::Sa),
        Just(BaselineAlgo::De),
        Just(BaselineAlgo::Rsw),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn labels_ignore_positive_scaling(d in prop::collection::vec(-10.0f64..10.0, 1..8), s in 1e-3f64..1e3) {
        let rule = LabelRule::default();
        let scaled: Vec<f64> = d.iter().map(|v| v * s).collect();
        prop_assert_eq!(label_from_delta(&d, &rule).unwrap(), label_from_delta(&scaled, &rule).unwrap());
    }

    #[test]
    fn label_is_last_negative_component(d in prop::collection::vec(-1.0f64..1.0, 1..8)) {
        let want = d.iter().rposition(|&v| v < 0.0).map_or(0, |i| i + 1);
        prop_assert_eq!(label_from_delta(&d, &LabelRule::default()).unwrap(), want);
    }

    #[test]
    fn baselines_stay_in_the_box_and_never_worsen(a in algo(), seed in 0u64..1000, budget in 5u64..120) {
        let f = Objective::goldstein_price();
        let mut cfg = BaselineConfig::new(a, budget, seed);
        if a == BaselineAlgo::Rsw {
            cfg = cfg.with_initial(vec![1.0, 1.0]);
        }
        let r = run_baseline(&f, &cfg).unwrap();
        prop_assert!(f.domain().contains(&r.best.x));
        let mut prev = f64::INFINITY;
        for s in &r.steps {
            prop_assert!(s.population.iter().all(|c| f.domain().contains(&c.x)));
            prop_assert!(s.best.f <= prev);
            prev = s.best.f;
        }
        prop_assert_eq!(r.best.f, f.eval(&r.best.x, 0).unwrap());
    }

    #[test]
    fn engine_is_deterministic_per_seed(seed in 0u64..50) {
        let cfg = GaConfig { seed, h_tol: 0.05, ..GaConfig::default() };
        let f = Objective::dejong_f1();
        prop_assert_eq!(ga_run(&f, &cfg).unwrap(), ga_run(&f, &cfg).unwrap());
    }
}
