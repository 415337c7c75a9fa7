//! Deterministic Bohmian recurrence simulator.
//!
//! A particle guided by a wave function that splits into two receding
//! harmonic-oscillator packets is integrated up to a horizon, re-centred in
//! the packet it ended up in, and fed back as the initial position of the next
//! recurrence. The resulting chain of relative positions (and LEFT/RIGHT
//! readings) is compared against |psi|^2.
//!
//! * [`numerics`]: error functions, Gauss-Kronrod quadrature, Dormand-Prince
//!   integrator, finite differences.
//! * [`models`]: the ground-state and first-excited-state splitting models.
//! * [`trajectories`]: single trajectories and fans.
//! * [`ensemble`]: the recurrence map and chains.
//! * [`stats`]: histograms and density comparisons.
//! * [`verify`]: residual checks of the implemented fields.
//! * [`cli`]: configuration and the `verify` / `ensemble` / `trajectories` /
//!   `figures` commands with their CSV, JSON and SVG output.

pub mod cli;
pub mod ensemble;
pub mod error;
pub mod models;
pub mod numerics;
pub mod stats;
pub mod trajectories;
pub mod verify;

pub use error::{Error, Result};
