//! Orthogonal polynomials for the Fermi-deformed weight `sigma_n e^{-n V}`.
//!
//! The ensemble lives in the shifted frame of [`crate::equilibrium`], where the
//! soft edge is at the origin.

mod deformation;
mod grid;
mod kernel;
mod lstat;
mod recurrence;

pub use deformation::DeformationQ;
pub use grid::{build_grid, log_sigma, EnsembleGrid, WeightSpec};
pub use kernel::OrthonormalEvaluator;
pub use lstat::{log_lstat_det, log_lstat_gamma, log_lstat_integral, norming_ratio, Ensemble};
pub use recurrence::{stieltjes, DiscreteMeasure, RecurrenceTable, StieltjesOutput};
