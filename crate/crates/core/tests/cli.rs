use std::process::{Command, Output};

fn subgrid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subgrid"))
        .args(args)
        .env_remove("SUBGRID_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn list_names_objectives_and_algorithms() {
    let o = subgrid(&["list"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    for name in ["f1", "f5", "easom", "goldstein-price", "slmga", "de"] {
        assert!(s.contains(name), "{name} missing from\n{s}");
    }
}

#[test]
fn run_f1_prints_markdown() {
    let o = subgrid(&["run", "--function", "f1"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("| Step1 | SLMGA | F1 | 10.24 | 0.5 | (0,0,0) | - | - |"));
    assert!(s.contains("| Step18 |"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&subgrid(&["run", "--function", "f1", "--algo", "bogus"])), 2);
    assert_eq!(code(&subgrid(&["run", "--function", "f1", "--format", "xml"])), 2);
    assert_eq!(code(&subgrid(&["run", "--function", "nope"])), 3);
    assert_eq!(code(&subgrid(&["run", "--expr", "x1 +", "--dim", "1"])), 3);
    assert_eq!(code(&subgrid(&["eval", "--function", "f1", "--at", "9,0,0"])), 3);
    assert_eq!(code(&subgrid(&["run", "--function", "f1", "--max-gens", "3"])), 4);
}

#[test]
fn not_converged_still_writes_the_report() {
    let o = subgrid(&["run", "--function", "f1", "--max-gens", "3", "--format", "csv"]);
    assert_eq!(code(&o), 4);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("0,")).count(), 3);
}

#[test]
fn eval_builtin_and_expression() {
    let o = subgrid(&["eval", "--function", "f5", "--at", "-32,-32"]);
    assert_eq!(code(&o), 0);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.998004).abs() < 1e-5);
    let o = subgrid(&["eval", "--expr", "x1*x2 - 1", "--at", "3,4"]);
    assert_eq!(stdout(&o).trim(), "11");
}

#[test]
fn seed_flag_and_environment_agree() {
    let args = ["run", "--function", "f4", "--h-tol", "0.01", "--format", "csv"];
    let with_flag = subgrid(&[&args[..], &["--seed", "7"]].concat());
    let with_env = Command::new(env!("CARGO_BIN_EXE_subgrid"))
        .args(args)
        .env("SUBGRID_SEED", "7")
        .output()
        .unwrap();
    let other = subgrid(&[&args[..], &["--seed", "8"]].concat());
    assert_eq!(code(&with_flag), 0);
    assert_eq!(with_flag.stdout, with_env.stdout);
    assert_ne!(with_flag.stdout, other.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_subgrid"))
        .args(args)
        .env("SUBGRID_SEED", "abc")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn out_writes_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gp.json");
    let o = subgrid(&["run", "--function", "goldstein-price", "--algo", "slm", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v[0]["best"]["f"].as_f64(), Some(3.0));
}

#[test]
fn config_file_runs_every_section() {
    let dir = tempfile::tempdir().unwrap();
    let ini = dir.path().join("exp.ini");
    let csv = dir.path().join("bowl.csv");
    std::fs::write(
        &ini,
        format!(
            "[gp]\nfunction = goldstein-price\nalgo = slm\n\n[bowl]\nexpr = (x1 - 1)^2 + x2^2\nlower = -2\nupper = 2\ndim = 2\nh_tol = 0.001\nformat = csv\nout = {}\n",
            csv.display()
        ),
    )
    .unwrap();
    let o = subgrid(&["run", "--config", ini.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("GOLDSTEIN-PRICE"));
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows = subgrid::harness::parse_csv(&text).unwrap();
    assert_eq!(rows.last().unwrap().best_x, vec![1.0, 0.0]);

    std::fs::write(&ini, "[x]\nfunction = f1\nwat = 1\n").unwrap();
    assert_eq!(code(&subgrid(&["run", "--config", ini.to_str().unwrap()])), 2);
}

#[test]
fn trace_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("easom.svg");
    let o = subgrid(&["trace", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("class=\"cell\"").count(), 11);
    assert_eq!(code(&subgrid(&["trace", "--function", "f1"])), 2);
}

#[test]
fn bench_prints_comparison_rows() {
    let o = subgrid(&["bench"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("| SLMGA | 18 | 8 | 10 | 16 | 9 |"), "{s}");
    assert!(s.contains("| PNG (reported) | 15 | 84 | 13 | 144 | 134 |"));
}
