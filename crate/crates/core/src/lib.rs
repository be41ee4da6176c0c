//! Classical laboratory for measuring the output of QSVT matrix-inversion
//! solvers inside a CFD correction loop.
//!
//! The crate is organised around five subsystems:
//!
//! - [`nozzle`]: a quasi-1D convergent-divergent nozzle solved by repeated
//!   linearisation, exposing every outer iteration's `A δx = δb` system.
//! - [`noise`]: measurement-error and amplitude-cutoff models for the
//!   correction vector, plus `(ε, α)` sweeps through the outer loop.
//! - [`ae`]: statistical simulation of Chebyshev-coin amplitude estimation,
//!   its signed (shifted) variant and the empirical query-complexity models.
//! - [`burnin`]: dummy peaked states, unique-outcome ratios and the
//!   slope model used to estimate `a_max` before amplitude estimation.
//! - [`resources`]: fault-tolerant costing (code distance, magic-state
//!   factories, oracle time) and the resource-table generator.
//!
//! [`cli`] wires these into the `qles` binary. Runnable walkthroughs for each
//! subsystem live under `examples/`.

// `!(x <= y)` is used deliberately so NaN parameters fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod ae;
pub mod burnin;
pub mod cli;
mod error;
pub mod noise;
pub mod nozzle;
pub mod resources;
pub mod rng;

pub use error::{Error, Result};
