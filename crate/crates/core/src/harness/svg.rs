//! Static SVG picture of a two-dimensional run: shaded objective, the
//! chosen cell of every level with its lattice lines, vertex labels and the
//! best point.

use std::fmt::Write as _;

use crate::domain::{GridSpec, RunReport};
use crate::error::{Error, Result};
use crate::functions::Objective;

const SIZE: f64 = 600.0;
const SHADE_CELLS: usize = 48;

struct View {
    lo: [f64; 2],
    span: [f64; 2],
}

impl View {
    fn px(&self, x: &[f64]) -> (f64, f64) {
        let u = (x[0] - self.lo[0]) / self.span[0] * SIZE;
        let v = SIZE - (x[1] - self.lo[1]) / self.span[1] * SIZE;
        (u, v)
    }

    fn len(&self, d: f64, axis: usize) -> f64 {
        d / self.span[axis] * SIZE
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Render `report` over `f`'s box. Errors unless `f` is two-dimensional.
pub fn emit_trace_svg(report: &RunReport, f: &Objective) -> Result<String> {
    if f.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: f.dim(),
        });
    }
    let d = f.domain();
    let view = View {
        lo: [d.lower()[0], d.lower()[1]],
        span: [d.width(0), d.width(1)],
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "<title>{} on {}</title>", escape(&report.algorithm), escape(&report.objective));

    // Shading by rank, so flat objectives like Easom still show structure.
    let mut samples = Vec::with_capacity(SHADE_CELLS * SHADE_CELLS);
    for i in 0..SHADE_CELLS {
        for j in 0..SHADE_CELLS {
            let x = [
                view.lo[0] + (i as f64 + 0.5) / SHADE_CELLS as f64 * view.span[0],
                view.lo[1] + (j as f64 + 0.5) / SHADE_CELLS as f64 * view.span[1],
            ];
            samples.push((i, j, f.noiseless().eval(&x, 0).unwrap_or(f64::INFINITY)));
        }
    }
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&a, &b| samples[a].2.total_cmp(&samples[b].2));
    let mut rank = vec![0.0; samples.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r as f64 / (samples.len() - 1).max(1) as f64;
    }
    let cell = SIZE / SHADE_CELLS as f64;
    s.push_str("<g class=\"shade\">\n");
    for (idx, &(i, j, _)) in samples.iter().enumerate() {
        let grey = (40.0 + 200.0 * rank[idx]).round() as u8;
        let _ = writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="{cell:.3}" height="{cell:.3}" fill="rgb({grey},{grey},{grey})"/>"#,
            i as f64 * cell,
            SIZE - (j as f64 + 1.0) * cell,
        );
    }
    s.push_str("</g>\n");

    for step in &report.steps {
        let Some(c) = &step.chosen_cell else { continue };
        let grid = GridSpec::new(d.clone(), c.level())?;
        let lo = grid.position_of(&c.anchor)?;
        let h = grid.step();
        let (x0, y1) = view.px(&lo);
        let (w, hh) = (view.len(h[0], 0), view.len(h[1], 1));
        let _ = writeln!(s, r#"<g class="level" data-level="{}">"#, step.level);
        let _ = writeln!(
            s,
            r##"<rect class="cell" x="{x0:.4}" y="{:.4}" width="{w:.4}" height="{hh:.4}" fill="none" stroke="#d62728" stroke-width="1.5"/>"##,
            y1 - hh,
        );
        // the midlines that split the cell at the next level
        let _ = writeln!(
            s,
            r##"<line class="grid" x1="{:.4}" y1="{:.4}" x2="{:.4}" y2="{:.4}" stroke="#1f77b4" stroke-width="0.5"/>"##,
            x0 + w / 2.0,
            y1 - hh,
            x0 + w / 2.0,
            y1,
        );
        let _ = writeln!(
            s,
            r##"<line class="grid" x1="{x0:.4}" y1="{:.4}" x2="{:.4}" y2="{:.4}" stroke="#1f77b4" stroke-width="0.5"/>"##,
            y1 - hh / 2.0,
            x0 + w,
            y1 - hh / 2.0,
        );
        for v in &step.labels {
            let (u, vv) = view.px(&v.candidate.x);
            let _ = writeln!(
                s,
                r#"<text class="label" x="{u:.3}" y="{vv:.3}" font-size="10" fill="yellow">{}</text>"#,
                v.label
            );
        }
        s.push_str("</g>\n");
    }
    let (bu, bv) = view.px(&report.best.x);
    let _ = writeln!(
        s,
        r##"<circle class="best" cx="{bu:.3}" cy="{bv:.3}" r="4" fill="#2ca02c" stroke="black"/>"##
    );
    s.push_str("</svg>\n");
    Ok(s)
}
