//! Numerical building blocks: error functions, adaptive quadrature, the
//! trajectory integrator and finite-difference stencils. Everything here is a
//! pure function of its inputs.

pub mod diff;
pub mod ode;
pub mod quadrature;
pub mod special;

pub use diff::{central_diff, one_sided_diff, windowed_diff, Order};
pub use ode::{solve_ode, solve_ode_sampled, OdeSpec, Sample, Sampling, Trajectory};
pub use quadrature::{integrate, Integral, QuadratureSpec};
pub use special::{erf, erfc, erfcx};
