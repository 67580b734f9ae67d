//! Integer labels from improvement directions, and completely labeled cells.
//!
//! A point is labeled 0 when its improvement vector is nonnegative in every
//! component; otherwise the label is the (1-based) index of the last
//! negative component. A cell whose vertex labels cover `{0, 1, ..., n}` is
//! completely labeled and is the target for subdivision.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::domain::{cells_per_side, Candidate, Cell, GridPoint, LabeledVertex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelVariant {
    /// `d = best_neighbor(x) - x`.
    BestNeighbor,
    /// `d = g(x) - x = ∇f(x)` for the fixed-point map `g(x) = x + ∇f(x)`.
    GradientFixedPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabelRule {
    pub variant: LabelVariant,
    /// Components with `d_j >= -epsilon` count as nonnegative.
    pub epsilon: f64,
}

impl Default for LabelRule {
    fn default() -> Self {
        Self {
            variant: LabelVariant::BestNeighbor,
            epsilon: 0.0,
        }
    }
}

impl LabelRule {
    pub fn gradient() -> Self {
        Self {
            variant: LabelVariant::GradientFixedPoint,
            epsilon: 0.0,
        }
    }
}

pub fn label_from_delta(d: &[f64], rule: &LabelRule) -> Result<usize> {
    if d.is_empty() {
        return Err(Error::InvalidDelta("empty improvement vector".into()));
    }
    if let Some(j) = d.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidDelta(format!("component {} is {}", j + 1, d[j])));
    }
    Ok(d
        .iter()
        .rposition(|&v| v < -rule.epsilon)
        .map_or(0, |j| j + 1))
}

pub fn delta_of(p: &Candidate, best: &Candidate) -> Result<Vec<f64>> {
    if p.x.len() != best.x.len() {
        return Err(Error::DimensionMismatch {
            expected: p.x.len(),
            got: best.x.len(),
        });
    }
    Ok(best.x.iter().zip(&p.x).map(|(b, a)| b - a).collect())
}

/// `g(x) - x` for `g(x) = x + ∇f(x)`, i.e. the gradient itself. A
/// non-finite gradient is reported as unavailable so callers fall back to
/// the best-neighbor rule.
pub fn gradient_delta(x: &[f64], grad: &[f64]) -> Result<Vec<f64>> {
    if x.len() != grad.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: grad.len(),
        });
    }
    if grad.iter().any(|g| !g.is_finite()) {
        return Err(Error::GradientUnavailable("non-finite gradient".into()));
    }
    Ok(grad.to_vec())
}

pub fn is_complete(labels: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n + 1];
    for &l in labels {
        if l <= n {
            seen[l] = true;
        }
    }
    seen.into_iter().all(|s| s)
}

/// Cells at `level` whose `2^n` vertices are all labeled in `vertices` and
/// carry a complete label set, in lexicographic anchor order.
pub fn find_complete_cells(vertices: &[LabeledVertex], level: u32) -> Vec<Cell> {
    let labels: HashMap<&GridPoint, usize> = vertices
        .iter()
        .filter(|v| v.candidate.point.level == level)
        .map(|v| (&v.candidate.point, v.label))
        .collect();
    let Some(n) = labels.keys().next().map(|p| p.dim()) else {
        return Vec::new();
    };
    // a complete cell needs all 2^n vertices labeled
    if n >= 64 || labels.len() < 1usize << n.min(63) {
        return Vec::new();
    }
    let max_anchor = cells_per_side(level) - 1;
    let mut cells: Vec<Cell> = labels
        .keys()
        .filter(|p| p.k.iter().all(|&k| k <= max_anchor))
        .map(|p| Cell::new((*p).clone()))
        .filter(|cell| {
            let Ok(corners) = cell.vertices() else {
                return false;
            };
            let mut found = Vec::with_capacity(corners.len());
            for v in &corners {
                match labels.get(v) {
                    Some(&l) => found.push(l),
                    None => return false,
                }
            }
            is_complete(&found, n)
        })
        .collect();
    cells.sort();
    cells
}
