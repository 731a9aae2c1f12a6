//! Design-technology pathfinding toolkit.
//!
//! The crate models a desk-scale physical-design exploration loop: artificial
//! netlist generation tuned by a surrogate model, clustering-based cell
//! width-regularization, a row/site placer with neighbor-swap tangling, a
//! congestion-aware grid router, a minimal static timing analyzer, parametric
//! power-delivery-network construction with tap-cell insertion, a resistive
//! nodal IR-drop solver, and PPAC metric/report emission.
//!
//! Module map:
//! - [`netcore`]: hypergraph netlist model, cell libraries, text formats,
//!   topological parameter extraction, naive width regularization.
//! - [`angen`]: artificial netlist generation, similarity score, candidate
//!   sweeps, surrogate-model tuning.
//! - [`cwreg`]: clustering-based cell width-regularization and bin packing.
//! - [`physdes`]: floorplan, placement, swap tangling, global routing, STA,
//!   and the swap-threshold / achievable-utilization protocols.
//! - [`pdnet`]: PDN mesh construction, tap cells, routing derates, resistive
//!   network extraction.
//! - [`irsolve`]: conjugate-gradient nodal solve and effective-instance-voltage
//!   statistics.
//! - [`explore`]: PPAC metrics, run records, sweep orchestration, reports.
//!
//! Data-parallel loops (candidate scoring, sweep grid points, dataset
//! generation) run on rayon when the default `parallel` feature is enabled
//! and fall back to sequential iteration without it.

pub mod angen;
pub mod cwreg;
pub mod error;
pub mod explore;
pub mod irsolve;
pub mod netcore;
mod par;
pub mod pdnet;
pub mod physdes;

pub use error::{Error, Result};
