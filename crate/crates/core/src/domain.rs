//! Value types shared by every engine: the search box, dyadic refinement
//! grids addressed by integer relative coordinates, cells, evaluated
//! candidates and run records.
//!
//! Positions are always derived from integer coordinates, never accumulated
//! in floating point, so the same grid point maps to the same `f64` at every
//! refinement level.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deepest supported refinement level. `2^(level-1)` must fit in a `u64`
/// and the step must stay well above the `f64` resolution of the box.
pub const MAX_LEVEL: u32 = 60;

/// Axis-aligned search box `[lower[d], upper[d]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidBox("box must have at least one dimension".into()));
        }
        if lower.len() != upper.len() {
            return Err(Error::InvalidBox(format!(
                "lower has {} entries, upper has {}",
                lower.len(),
                upper.len()
            )));
        }
        for (d, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::InvalidBox(format!(
                    "dimension {d}: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(lo: f64, hi: f64, dim: usize) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, d: usize) -> f64 {
        self.upper[d] - self.lower[d]
    }

    pub fn widths(&self) -> Vec<f64> {
        (0..self.dim()).map(|d| self.width(d)).collect()
    }

    /// Membership with a relative slack of `1e-12` of the width, which only
    /// absorbs rounding in `lower + k*step` at the upper face.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().enumerate().all(|(d, &v)| {
                let slack = 1e-12 * self.width(d);
                v >= self.lower[d] - slack && v <= self.upper[d] + slack
            })
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (d, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lower[d], self.upper[d]);
        }
    }
}

/// Refinement grid at one level: `step[d] = width[d] / 2^(level-1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    domain: BoxDomain,
    level: u32,
    step: Vec<f64>,
}

impl GridSpec {
    pub fn new(domain: BoxDomain, level: u32) -> Result<Self> {
        if level == 0 || level > MAX_LEVEL {
            return Err(Error::InvalidGridPoint(format!(
                "level {level} outside 1..={MAX_LEVEL}"
            )));
        }
        let divisions = cells_per_side(level) as f64;
        let step = domain.widths().iter().map(|w| w / divisions).collect();
        Ok(Self { domain, level, step })
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn step(&self) -> &[f64] {
        &self.step
    }

    /// The same box one level finer.
    pub fn refined(&self) -> Result<Self> {
        Self::new(self.domain.clone(), self.level + 1)
    }

    /// Largest valid relative coordinate along every axis.
    pub fn max_index(&self) -> u64 {
        cells_per_side(self.level)
    }

    pub fn position_of(&self, p: &GridPoint) -> Result<Vec<f64>> {
        if p.level != self.level {
            return Err(Error::InvalidGridPoint(format!(
                "point at level {} used with grid at level {}",
                p.level, self.level
            )));
        }
        if p.k.len() != self.domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain.dim(),
                got: p.k.len(),
            });
        }
        let max = self.max_index();
        if let Some(d) = p.k.iter().position(|&k| k > max) {
            return Err(Error::InvalidGridPoint(format!(
                "k[{d}] = {} exceeds {max} at level {}",
                p.k[d], self.level
            )));
        }
        Ok(self.position_unchecked(&p.k))
    }

    pub(crate) fn position_unchecked(&self, k: &[u64]) -> Vec<f64> {
        let lower = self.domain.lower();
        let upper = self.domain.upper();
        let max = self.max_index();
        k.iter()
            .enumerate()
            .map(|(d, &kd)| {
                // The far face is pinned to the exact bound.
                if kd == max {
                    upper[d]
                } else {
                    lower[d] + kd as f64 * self.step[d]
                }
            })
            .collect()
    }

    /// Relative coordinates of the grid point nearest to `x`, if `x` lies on
    /// the grid to within a tiny fraction of a step.
    pub fn index_of(&self, x: &[f64]) -> Option<GridPoint> {
        if x.len() != self.domain.dim() {
            return None;
        }
        let max = self.max_index() as f64;
        let mut k = Vec::with_capacity(x.len());
        for (d, &v) in x.iter().enumerate() {
            let r = (v - self.domain.lower()[d]) / self.step[d];
            let nearest = r.round();
            if (r - nearest).abs() > 1e-6 || nearest < 0.0 || nearest > max {
                return None;
            }
            k.push(nearest as u64);
        }
        Some(GridPoint::new(k, self.level))
    }
}

/// `2^(level-1)`: number of cells along each axis at `level`.
pub fn cells_per_side(level: u32) -> u64 {
    1u64 << (level - 1)
}

/// Integer relative coordinates of a crossing point at a refinement level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridPoint {
    pub k: Vec<u64>,
    pub level: u32,
}

impl GridPoint {
    pub fn new(k: Vec<u64>, level: u32) -> Self {
        Self { k, level }
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }

    /// Same position one level finer: `k' = 2k`.
    pub fn refine(&self) -> GridPoint {
        GridPoint {
            k: self.k.iter().map(|&k| 2 * k).collect(),
            level: self.level + 1,
        }
    }

    /// Same position `levels` levels finer.
    pub fn refine_by(&self, levels: u32) -> GridPoint {
        GridPoint {
            k: self.k.iter().map(|&k| k << levels).collect(),
            level: self.level + levels,
        }
    }
}

pub fn position_of(p: &GridPoint, g: &GridSpec) -> Result<Vec<f64>> {
    g.position_of(p)
}

pub fn refine(p: &GridPoint) -> GridPoint {
    p.refine()
}

/// Axis-aligned hypercube of side `step` whose smallest vertex is `anchor`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub anchor: GridPoint,
}

impl Cell {
    pub fn new(anchor: GridPoint) -> Self {
        Self { anchor }
    }

    pub fn level(&self) -> u32 {
        self.anchor.level
    }

    pub fn dim(&self) -> usize {
        self.anchor.dim()
    }

    /// The whole box as a single level-1 cell.
    pub fn root(dim: usize) -> Self {
        Self::new(GridPoint::new(vec![0; dim], 1))
    }

    fn check_bounds(&self) -> Result<()> {
        let max = cells_per_side(self.level());
        if let Some(d) = self.anchor.k.iter().position(|&k| k + 1 > max) {
            return Err(Error::InvalidCell(format!(
                "anchor k[{d}] = {} leaves no room for a cell at level {}",
                self.anchor.k[d],
                self.level()
            )));
        }
        Ok(())
    }

    /// The `2^n` vertices, anchor first, in lexicographic order of the
    /// offset `δ ∈ {0,1}^n` (first axis most significant).
    pub fn vertices(&self) -> Result<Vec<GridPoint>> {
        self.check_bounds()?;
        let n = self.dim();
        Ok((0..1u64 << n)
            .map(|bits| {
                let k = (0..n)
                    .map(|d| self.anchor.k[d] + ((bits >> (n - 1 - d)) & 1))
                    .collect();
                GridPoint::new(k, self.level())
            })
            .collect())
    }

    /// True if `p` (at this level or finer) lies in the closed cell.
    pub fn contains(&self, p: &GridPoint) -> bool {
        if p.level < self.level() || p.dim() != self.dim() {
            return false;
        }
        let shift = p.level - self.level();
        self.anchor
            .k
            .iter()
            .zip(&p.k)
            .all(|(&a, &k)| k >= a << shift && k <= (a + 1) << shift)
    }

    /// The `3^n` crossing points of this cell one level finer, lexicographic.
    pub fn refined_lattice(&self) -> Vec<GridPoint> {
        let base = self.anchor.refine();
        let n = self.dim();
        let count = 3usize.pow(n as u32);
        (0..count)
            .map(|mut idx| {
                let mut k = vec![0u64; n];
                for d in (0..n).rev() {
                    k[d] = base.k[d] + (idx % 3) as u64;
                    idx /= 3;
                }
                GridPoint::new(k, base.level)
            })
            .collect()
    }

    /// All cells at `level` that contain `p`, lexicographic by anchor.
    /// Lexicographically first entry of [`Cell::containing`], without
    /// enumerating the up to `2^n` alternatives.
    pub fn first_containing(p: &GridPoint, level: u32) -> Option<Cell> {
        if p.level < level {
            return None;
        }
        let shift = p.level - level;
        let max_anchor = cells_per_side(level) - 1;
        let k = p
            .k
            .iter()
            .map(|&k| {
                let base = k >> shift;
                if base << shift == k && base > 0 {
                    base - 1
                } else {
                    base.min(max_anchor)
                }
            })
            .collect();
        Some(Cell::new(GridPoint::new(k, level)))
    }

    pub fn containing(p: &GridPoint, level: u32) -> Vec<Cell> {
        if p.level < level {
            return Vec::new();
        }
        let shift = p.level - level;
        let max_anchor = cells_per_side(level) - 1;
        let mut per_axis: Vec<Vec<u64>> = Vec::with_capacity(p.dim());
        for &k in &p.k {
            let base = k >> shift;
            let mut opts = Vec::with_capacity(2);
            let on_face = base << shift == k;
            if on_face && base > 0 {
                opts.push(base - 1);
            }
            if base <= max_anchor {
                opts.push(base);
            }
            per_axis.push(opts);
        }
        let mut out = vec![Vec::with_capacity(p.dim())];
        for opts in per_axis {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    opts.iter().map(move |&o| {
                        let mut next = prefix.clone();
                        next.push(o);
                        next
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(|k| Cell::new(GridPoint::new(k, level)))
            .collect()
    }
}

pub fn cell_vertices(c: &Cell) -> Result<Vec<GridPoint>> {
    c.vertices()
}

/// An evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub point: GridPoint,
    pub x: Vec<f64>,
    pub f: f64,
}

impl Candidate {
    /// Total order used everywhere a single best candidate must be picked:
    /// lower `f` first, then lexicographically smaller position.
    pub fn better_than(&self, other: &Candidate) -> bool {
        match self.f.total_cmp(&other.f) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => lex_less(&self.x, &other.x),
        }
    }
}

pub(crate) fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// A probed crossing point with its improvement vector and label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledVertex {
    pub candidate: Candidate,
    pub label: usize,
    pub delta: Vec<f64>,
}

/// One refinement level (one generation) of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub level: u32,
    /// Step of the grid the population lives on (the "mutation size").
    pub h: Vec<f64>,
    pub population: Vec<Candidate>,
    pub labels: Vec<LabeledVertex>,
    pub chosen_cell: Option<Cell>,
    /// Best candidate seen so far, including this step.
    pub best: Candidate,
    pub evaluations: u64,
}

impl StepRecord {
    pub fn label_multiset(&self) -> Vec<usize> {
        let mut labels: Vec<usize> = self.labels.iter().map(|v| v.label).collect();
        labels.sort_unstable();
        labels
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    pub objective: String,
    /// Every hyperparameter in effect, echoed into emitted headers.
    pub params: Vec<(String, String)>,
    pub steps: Vec<StepRecord>,
    pub best: Candidate,
    pub evaluations: u64,
    pub converged: bool,
}

impl RunReport {
    pub fn generations(&self) -> usize {
        self.steps.len()
    }

    pub fn final_step(&self) -> Option<&StepRecord> {
        self.steps.last()
    }
}
