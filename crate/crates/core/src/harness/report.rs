//! CSV, Markdown and JSON renderings of run reports.
//!
//! CSV starts with `#` comment lines echoing every parameter, then one row
//! per step: `report,step,h,best_x_1..best_x_n,best_f,label_multiset`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::domain::{RunReport, StepRecord};
use crate::error::{Error, Result};
use crate::functions::Objective;
use crate::harness::experiment::OutputFormat;

pub fn emit_table(reports: &[RunReport], format: OutputFormat) -> Result<String> {
    if reports.is_empty() {
        return Err(Error::Config("no reports to emit".into()));
    }
    match format {
        OutputFormat::Csv => emit_csv(reports),
        OutputFormat::Markdown => Ok(emit_markdown(reports)),
        OutputFormat::Json => serde_json::to_string_pretty(reports)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| Error::Io(e.to_string())),
    }
}

/// The step of a record as one field: a single number when every axis
/// agrees, otherwise the components joined by `;`.
fn step_field(h: &[f64]) -> String {
    if h.windows(2).all(|w| w[0] == w[1]) {
        h.first().map(|v| v.to_string()).unwrap_or_default()
    } else {
        join(h, ";")
    }
}

fn join(v: &[f64], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn emit_csv(reports: &[RunReport]) -> Result<String> {
    let n = reports.iter().map(|r| r.best.x.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (i, r) in reports.iter().enumerate() {
        let _ = writeln!(out, "# report {i}: {} on {}", r.algorithm, r.objective);
        for (k, v) in &r.params {
            let _ = writeln!(out, "# {k}={v}");
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["report".to_string(), "step".into(), "h".into()];
    header.extend((1..=n).map(|d| format!("best_x_{d}")));
    header.extend(["best_f".to_string(), "label_multiset".into()]);
    w.write_record(&header).map_err(csv_err)?;
    for (i, r) in reports.iter().enumerate() {
        for (g, s) in r.steps.iter().enumerate() {
            let mut row = vec![i.to_string(), (g + 1).to_string(), step_field(&s.h)];
            row.extend((0..n).map(|d| s.best.x.get(d).map(|v| v.to_string()).unwrap_or_default()));
            row.push(s.best.f.to_string());
            row.push(
                s.label_multiset()
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
            );
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?)
        .map_err(|e| Error::Io(e.to_string()))?;
    out.push_str(&body);
    Ok(out)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub report: usize,
    pub step: usize,
    pub h: Vec<f64>,
    pub best_x: Vec<f64>,
    pub best_f: f64,
    pub labels: Vec<usize>,
}

/// Read back the output of the CSV emitter.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let bad = |what: &str| Error::Config(format!("malformed CSV {what}"));
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad("number"));
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let len = rec.len();
        if len < 5 {
            return Err(bad("row"));
        }
        let best_x = (3..len - 2)
            .filter(|&i| !rec[i].is_empty())
            .map(|i| num(&rec[i]))
            .collect::<Result<_>>()?;
        rows.push(CsvRow {
            report: rec[0].parse().map_err(|_| bad("report index"))?,
            step: rec[1].parse().map_err(|_| bad("step"))?,
            h: rec[2].split(';').map(num).collect::<Result<_>>()?,
            best_x,
            best_f: num(&rec[len - 2])?,
            labels: rec[len - 1]
                .split_whitespace()
                .map(|l| l.parse().map_err(|_| bad("label")))
                .collect::<Result<_>>()?,
        });
    }
    Ok(rows)
}

fn point(x: &[f64]) -> String {
    format!("({})", join(x, ","))
}

fn sd_cell(r: &RunReport) -> String {
    match Objective::by_name(&r.objective).ok().and_then(|f| f.known_optimum().cloned()) {
        Some(opt) if opt.x.len() == r.best.x.len() => {
            let d: f64 = r.best.x.iter().zip(&opt.x).map(|(a, b)| (a - b).powi(2)).sum();
            d.sqrt().to_string()
        }
        _ => "-".into(),
    }
}

fn mutation_rate(r: &RunReport) -> &'static str {
    // The step halves every generation for both engines.
    match r.algorithm.as_str() {
        "slm" | "slmga" => "0.5",
        _ => "-",
    }
}

fn md_row(out: &mut String, g: usize, r: &RunReport, s: &StepRecord, last: bool) {
    let (alg, fun, rate) = if g == 0 {
        (r.algorithm.to_uppercase(), r.objective.to_uppercase(), mutation_rate(r))
    } else {
        (String::new(), String::new(), "")
    };
    let (bv, sd) = if last {
        (r.best.f.to_string(), sd_cell(r))
    } else {
        ("-".into(), "-".into())
    };
    let _ = writeln!(
        out,
        "| Step{} | {alg} | {fun} | {} | {rate} | {} | {bv} | {sd} |",
        g + 1,
        step_field(&s.h),
        point(&s.best.x),
    );
}

fn emit_markdown(reports: &[RunReport]) -> String {
    let mut out = String::new();
    out.push_str("| Step | Algorithm | Function | Mutation Size | Mutation Rate | Best Point | BV | SD |\n");
    out.push_str("|---|---|---|---|---|---|---|---|\n");
    for r in reports {
        if r.steps.is_empty() {
            let _ = writeln!(
                out,
                "| Step1 | {} | {} | - | - | {} | {} | {} |",
                r.algorithm.to_uppercase(),
                r.objective.to_uppercase(),
                point(&r.best.x),
                r.best.f,
                sd_cell(r)
            );
            continue;
        }
        let last = r.steps.len() - 1;
        for (g, s) in r.steps.iter().enumerate() {
            md_row(&mut out, g, r, s, g == last);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::slmga::{ga_run, GaConfig};

    fn f1_report() -> RunReport {
        ga_run(&Objective::dejong_f1(), &GaConfig::default()).unwrap()
    }

    #[test]
    fn markdown_first_row_matches_layout() {
        let md = emit_table(&[f1_report()], OutputFormat::Markdown).unwrap();
        let first = md.lines().nth(2).unwrap();
        assert_eq!(first, "| Step1 | SLMGA | F1 | 10.24 | 0.5 | (0,0,0) | - | - |");
        let last = md.lines().last().unwrap();
        assert!(last.starts_with("| Step18 |"));
        assert!(last.ends_with("| 0 | 0 |"));
    }

    #[test]
    fn csv_round_trip() {
        let r = f1_report();
        let text = emit_table(std::slice::from_ref(&r), OutputFormat::Csv).unwrap();
        assert!(text.contains("# h_tol=0.0001"));
        let rows = parse_csv(&text).unwrap();
        assert_eq!(rows.len(), r.steps.len());
        for (row, s) in rows.iter().zip(&r.steps) {
            assert_eq!(row.h, s.h[..1].to_vec());
            assert_eq!(row.best_x, s.best.x);
            assert_eq!(row.best_f, s.best.f);
            assert_eq!(row.labels, s.label_multiset());
        }
    }

    #[test]
    fn json_is_report_serialization() {
        let r = f1_report();
        let text = emit_table(std::slice::from_ref(&r), OutputFormat::Json).unwrap();
        let back: Vec<RunReport> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, vec![r]);
    }

    #[test]
    fn empty_input_rejected_and_empty_steps_still_rendered() {
        assert!(emit_table(&[], OutputFormat::Csv).is_err());
        let mut r = f1_report();
        r.steps.clear();
        let md = emit_table(&[r], OutputFormat::Markdown).unwrap();
        assert_eq!(md.lines().count(), 3);
    }
}
