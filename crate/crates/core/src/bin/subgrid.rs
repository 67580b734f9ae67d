use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use subgrid::harness::config::{experiment_from_pairs, load_config, ALGORITHMS};
use subgrid::harness::suite::{dejong_suite, REPORTED_GENERATIONS, REPORTED_PNG};
use subgrid::harness::{emit_table, emit_trace_svg, run_experiment, ExperimentConfig, OutputFormat};
use subgrid::functions::OBJECTIVE_NAMES;
use subgrid::{Error, Objective, Result};

#[derive(Parser)]
#[command(name = "subgrid", version, about = "Subdivision labeling optimizer and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List objectives and algorithms.
    List,
    /// Run one experiment from flags, or every section of a config file.
    Run(RunArgs),
    /// SLMGA on F1..F5 with the generation comparison table.
    Bench(CommonArgs),
    /// Write an SVG trace of a two-dimensional run.
    Trace(RunArgs),
    /// Evaluate an objective at a point.
    Eval {
        #[command(flatten)]
        target: Target,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
}

#[derive(Args, Clone, Default)]
struct Target {
    #[arg(long)]
    function: Option<String>,
    /// Objective over x1..xn; needs --dim or per-axis bounds.
    #[arg(long, allow_hyphen_values = true)]
    expr: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    /// Lower bound, one value or comma-separated per axis.
    #[arg(long, allow_hyphen_values = true)]
    lower: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    upper: Option<String>,
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Defaults to $SUBGRID_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u32>,
    /// csv, markdown or json.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    #[command(flatten)]
    target: Target,
    /// slm, slmga, rs, rsw, sa or de.
    #[arg(long)]
    algo: Option<String>,
    #[arg(long)]
    h_tol: Option<f64>,
    /// Generation cap (engines) or budget (baselines).
    #[arg(long)]
    max_gens: Option<u32>,
    #[command(flatten)]
    common: CommonArgs,
    /// INI file with one experiment per section; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn default_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("SUBGRID_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("SUBGRID_SEED=`{v}` is not an integer"))),
        Err(_) => Ok(0),
    }
}

fn pairs(a: &RunArgs) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            m.insert(k.to_string(), v);
        }
    };
    put("function", a.target.function.clone());
    put("expr", a.target.expr.clone());
    put("dim", a.target.dim.map(|v| v.to_string()));
    put("lower", a.target.lower.clone());
    put("upper", a.target.upper.clone());
    put("algo", a.algo.clone());
    put("h_tol", a.h_tol.map(|v| v.to_string()));
    put("max_gens", a.max_gens.map(|v| v.to_string()));
    put("trials", a.common.trials.map(|v| v.to_string()));
    put("format", a.common.format.clone());
    m
}

fn experiments(a: &RunArgs) -> Result<Vec<ExperimentConfig>> {
    let seed = default_seed(a.common.seed)?;
    let mut exps = match &a.config {
        Some(path) => load_config(path)?,
        None => {
            let mut p = pairs(a);
            p.insert("seed".into(), seed.to_string());
            vec![experiment_from_pairs("cli", &p)?]
        }
    };
    if a.config.is_some() {
        for e in &mut exps {
            if a.common.seed.is_some() || std::env::var_os("SUBGRID_SEED").is_some() {
                e.seed = seed;
            }
            if let Some(t) = a.common.trials {
                e.trials = t;
            }
            if let Some(f) = &a.common.format {
                e.format = f.parse()?;
            }
        }
    }
    if let Some(out) = &a.common.out {
        for e in &mut exps {
            e.out = Some(out.clone());
        }
    }
    Ok(exps)
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(a: &RunArgs) -> Result<bool> {
    let mut all_converged = true;
    let mut by_file: BTreeMap<Option<PathBuf>, String> = BTreeMap::new();
    for e in experiments(a)? {
        let result = run_experiment(&e)?;
        let engine = matches!(
            e.algorithm,
            subgrid::harness::AlgorithmConfig::Slm(_) | subgrid::harness::AlgorithmConfig::Slmga(_)
        );
        all_converged &= !engine || result.all_converged();
        let m = &result.metrics;
        eprintln!(
            "{}: bv {} (median {}) generations {} sd {}{}",
            e.name,
            m.bv,
            m.bv_median,
            m.generations,
            m.sd_euclid.map_or("-".into(), |v| v.to_string()),
            m.png.map_or(String::new(), |p| format!(" png {p:.0}")),
        );
        let text = emit_table(&result.reports, e.format)?;
        by_file.entry(e.out.clone()).or_default().push_str(&text);
        if let Some(svg_path) = &e.trace_svg {
            let f = e.objective.resolve()?;
            std::fs::write(svg_path, emit_trace_svg(result.best_report(), &f)?)?;
        }
    }
    for (path, text) in &by_file {
        write_out(path.as_ref(), text)?;
    }
    Ok(all_converged)
}

fn bench(c: &CommonArgs) -> Result<bool> {
    let seed = default_seed(c.seed)?;
    let format: OutputFormat = c.format.as_deref().unwrap_or("markdown").parse()?;
    let mut reports = Vec::new();
    let mut gens = Vec::new();
    for mut e in dejong_suite() {
        e.seed = seed;
        e.trials = c.trials.unwrap_or(1);
        let r = run_experiment(&e)?;
        gens.push(r.metrics.generations);
        reports.push(r.best_report().clone());
    }
    let mut text = emit_table(&reports, format)?;
    if format == OutputFormat::Markdown {
        text.push_str("\n| Algorithms | F1 | F2 | F3 | F4 | F5 |\n|---|---|---|---|---|---|\n");
        for (name, row) in REPORTED_GENERATIONS {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            text.push_str(&format!("| {name} (reported) | {} |\n", cells.join(" | ")));
        }
        let ours: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
        text.push_str(&format!("| SLMGA | {} |\n", ours.join(" | ")));
        let png: Vec<String> = REPORTED_GENERATIONS[4]
            .1
            .iter()
            .zip(&gens)
            .map(|(&de, &g)| format!("{:.0}", subgrid::harness::png_ratio(de, g as u32)))
            .collect();
        text.push_str(&format!("| PNG | {} |\n", png.join(" | ")));
        let reported: Vec<String> = REPORTED_PNG.iter().map(|v| v.to_string()).collect();
        text.push_str(&format!("| PNG (reported) | {} |\n", reported.join(" | ")));
    }
    write_out(c.out.as_ref(), &text)?;
    Ok(reports.iter().all(|r| r.converged))
}

fn trace(a: &RunArgs) -> Result<bool> {
    let mut a = a.clone();
    if a.target.function.is_none() && a.target.expr.is_none() && a.config.is_none() {
        a.target.function = Some("easom".into());
        a.algo.get_or_insert_with(|| "slm".into());
        a.max_gens.get_or_insert(11);
        a.h_tol.get_or_insert(1e-6);
    }
    let e = experiments(&a)?.remove(0);
    let f = e.objective.resolve()?;
    let result = run_experiment(&e)?;
    let svg = emit_trace_svg(result.best_report(), &f)?;
    write_out(a.common.out.as_ref(), &svg)?;
    Ok(true)
}

fn eval(t: &Target, at: &str) -> Result<()> {
    let mut p = BTreeMap::new();
    if let Some(f) = &t.function {
        p.insert("function".to_string(), f.clone());
    }
    if let Some(e) = &t.expr {
        p.insert("expr".to_string(), e.clone());
    }
    if let Some(d) = t.dim {
        p.insert("dim".to_string(), d.to_string());
    }
    if let Some(l) = &t.lower {
        p.insert("lower".to_string(), l.clone());
    }
    if let Some(u) = &t.upper {
        p.insert("upper".to_string(), u.clone());
    }
    let x: Vec<f64> = at
        .split(',')
        .map(|v| v.trim().parse().map_err(|_| Error::Config(format!("bad coordinate `{v}`"))))
        .collect::<Result<_>>()?;
    if t.expr.is_some() && t.dim.is_none() && t.lower.is_none() && t.upper.is_none() {
        p.insert("dim".to_string(), x.len().to_string());
        p.insert("lower".to_string(), "-1e300".into());
        p.insert("upper".to_string(), "1e300".into());
    }
    let f: Objective = experiment_from_pairs("eval", &p)?.objective.resolve()?;
    println!("{}", f.eval(&x, 0)?);
    Ok(())
}

fn list() {
    println!("objectives:");
    for name in OBJECTIVE_NAMES {
        let f = Objective::by_name(name).expect("listed objective resolves");
        let d = f.domain();
        println!("  {name:<16} n={:<3} [{}, {}]", f.dim(), d.lower()[0], d.upper()[0]);
    }
    println!("algorithms: {}", ALGORITHMS.join(", "));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::List => {
            list();
            Ok(true)
        }
        Command::Run(a) => run(a),
        Command::Bench(c) => bench(c),
        Command::Trace(a) => trace(a),
        Command::Eval { target, at } => eval(target, at).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("warning: convergence not reached; report written");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
