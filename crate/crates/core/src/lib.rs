//! Global optimization by subdivision labeling.
//!
//! The search lays a dyadic grid over a box, labels each crossing point by
//! the direction of its best neighbor, and repeatedly halves the completely
//! labeled cell holding the best labeled vertex. [`engine::slm`] is the
//! serial method; [`engine::slmga`] recasts it as a genetic algorithm whose
//! mutation size halves every generation.
//!
//! Also included: the De Jong F1–F5, Goldstein-Price and Easom objectives
//! ([`functions`]), a small expression language for custom objectives
//! ([`expr`]), random search, random walk, simulated annealing and
//! differential evolution baselines ([`baselines`]), and an experiment
//! harness with CSV/Markdown/JSON/SVG output ([`harness`]).

pub mod baselines;
pub mod domain;
pub mod engine;
pub mod error;
pub mod expr;
pub mod functions;
pub mod harness;
pub mod labeling;

pub use baselines::{run_baseline, BaselineAlgo, BaselineConfig};
pub use domain::{BoxDomain, Candidate, Cell, GridPoint, GridSpec, LabeledVertex, RunReport, StepRecord};
pub use engine::slm::{slm_run, SlmConfig};
pub use engine::slmga::{ga_run, GaConfig};
pub use error::{Error, Result};
pub use functions::Objective;
pub use labeling::{LabelRule, LabelVariant};
