//! Sparse recovery for single-snapshot compressive beamforming.
//!
//! * [`lars`]: complex weighted-Lasso homotopy.
//! * [`wen`]: pathwise weighted elastic net over a grid of mixing values.
//! * [`saen`]: sequential adaptive elastic net and one-shot adaptive variants.
//! * [`greedy`]: OMP and CoSaMP baselines.
//! * [`model`]: ULA steering vectors, grids and snapshot simulation.
//! * [`harness`]: Monte-Carlo experiments and result files.

// `!(x > 0.0)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod greedy;
pub mod harness;
pub mod lars;
pub mod model;
pub mod numerics;
pub mod saen;
pub mod wen;

pub use error::{Error, Result};
pub use greedy::{cosamp, omp, GreedySolution};
pub use lars::{c_lars_wlasso, Design, KnotPath, PathMode, WeightVector};
pub use model::{generate_snapshot, mbc, steering_vector, Scenario, Snapshot, SteeringGrid};
pub use numerics::{ComplexMatrix, ComplexVector};
pub use saen::{aen_variant, saen, AenKind, SaenTrace};
pub use wen::{c_pw_wen, AlphaGrid, WenSolution};
