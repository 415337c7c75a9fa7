use thiserror::Error;

/// Errors raised anywhere in the simulator.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("quadrature did not converge on [{a}, {b}] after {subdivisions} subdivisions (error estimate {estimate:e})")]
    NonConvergence {
        a: f64,
        b: f64,
        subdivisions: usize,
        estimate: f64,
    },
    #[error("ODE step size underflow at t = {t} (x = {x}, h = {h:e})")]
    StepFailure { t: f64, x: f64, h: f64 },
    #[error("({x}, {t}) lies outside the certified evaluation domain of {model}")]
    DomainError { model: &'static str, x: f64, t: f64 },
    #[error("density node at x = {x}, t = {t}: velocity undefined")]
    NodeSingularity { x: f64, t: f64 },
    #[error("x = 0 is the unstable equilibrium; the recurrence map is undefined there")]
    DegenerateEquilibrium,
    #[error("empty input")]
    EmptyInput,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("histograms differ in binning (width {0} vs {1})")]
    IncompatibleHistograms(f64, f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
