//! Guided-wave models.
//!
//! Both models describe a single particle (hbar = m = 1) whose wave function
//! starts as a harmonic-oscillator eigenstate and splits into two copies
//! receding from the origin at unit speed. A model provides the density
//! rho = |psi|^2, its time derivative and the guidance velocity; the
//! trajectory and ensemble layers only ever see this interface.

mod excited;
mod ground;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate, QuadratureSpec};

pub use excited::ExcitedStateSplit;
pub use ground::GroundStateSplit;

/// Densities below this are treated as nodes where the velocity is undefined.
pub const NODE_GUARD: f64 = 1e-300;

/// Which of the two receding packets (or wells) a position belongs to.
/// Doubles as the LEFT/RIGHT measurement reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// LEFT for negative positions, RIGHT otherwise.
    pub fn of(x: f64) -> Side {
        if x < 0.0 {
            Side::Left
        } else {
            Side::Right
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }

    pub fn flipped(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "LEFT",
            Side::Right => "RIGHT",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "LEFT" | "left" => Ok(Side::Left),
            "RIGHT" | "right" => Ok(Side::Right),
            other => Err(Error::InvalidParameter(format!("unknown side {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Ground,
    Excited,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Ground => "ground",
            ModelKind::Excited => "excited",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ground" => Ok(ModelKind::Ground),
            "excited" => Ok(ModelKind::Excited),
            other => Err(Error::InvalidParameter(format!(
                "unknown model {other:?} (expected \"ground\" or \"excited\")"
            ))),
        }
    }
}

/// A guided wave: density, its time derivative and the guidance velocity,
/// plus what the recurrence map needs to know about its geometry.
///
/// Implementations are x-symmetric: rho is even and v is odd in x, and
/// v(x, 0) = 0.
pub trait WaveModel: Send + Sync {
    fn kind(&self) -> ModelKind;

    /// rho(x, t) = |psi(x, t)|^2, normalised to one.
    fn density(&self, x: f64, t: f64) -> f64;

    /// Partial derivative of rho with respect to t.
    fn density_dt(&self, x: f64, t: f64) -> f64;

    /// Guidance velocity dx/dt at (x, t).
    fn velocity(&self, x: f64, t: f64) -> Result<f64>;

    /// |psi(x, 0)|^2, the density every recurrence should reproduce.
    fn reference_density(&self, x: f64) -> f64;

    /// Cumulative distribution of [`WaveModel::reference_density`].
    fn reference_cdf(&self, x: f64) -> f64;

    /// Time between recurrences used by default.
    fn default_horizon(&self) -> f64;

    /// Centre of the well on `side` at time t. Both packets move at unit
    /// speed, so this is -t or +t.
    fn well_center(&self, t: f64, side: Side) -> f64 {
        side.sign() * t
    }
}

/// Velocity from the continuity equation with zero flux through x = 0:
/// v(x, t) = -(1/rho) * integral_0^x d_t rho(y, t) dy.
///
/// `spec.abs_tol` is read in velocity units (it is scaled by rho before the
/// integration). Beyond the packet centre the flux is taken from the outer
/// tail instead, -integral_0^x = integral_x^inf, which avoids cancellation
/// where rho is exponentially small; this uses integral_0^inf d_t rho = 0,
/// true for any normalised symmetric density.
pub fn continuity_velocity<M: WaveModel + ?Sized>(
    model: &M,
    x: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    continuity_velocity_with(|y| model.density(y, t), |y| model.density_dt(y, t), x, t, spec)
}

/// Length of the outer-tail integration window.
const TAIL_WINDOW: f64 = 10.0;

pub(crate) fn continuity_velocity_with<R, D>(
    density: R,
    density_dt: D,
    x: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64>
where
    R: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if x == 0.0 {
        return Ok(0.0);
    }
    let rho = density(x);
    if !(rho >= NODE_GUARD) {
        return Err(Error::NodeSingularity { x, t });
    }
    let ax = x.abs();
    let scaled = spec.with_abs_tol(spec.abs_tol * rho);
    let inner_flux = if ax <= t.abs() + 1.0 {
        integrate(&density_dt, 0.0, ax, &scaled)?.value
    } else {
        -integrate(&density_dt, ax, ax + TAIL_WINDOW, &scaled)?.value
    };
    Ok(x.signum() * (-inner_flux / rho))
}

/// Runtime choice between the two models.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Ground(GroundStateSplit),
    Excited(ExcitedStateSplit),
}

impl Model {
    pub fn new(kind: ModelKind, quad: QuadratureSpec) -> Model {
        match kind {
            ModelKind::Ground => Model::Ground(GroundStateSplit::with_quadrature(quad)),
            ModelKind::Excited => Model::Excited(ExcitedStateSplit::with_quadrature(quad)),
        }
    }

    pub fn from_kind(kind: ModelKind) -> Model {
        Model::new(kind, QuadratureSpec::default())
    }
}

macro_rules! delegate {
    ($self:ident, $m:ident => $e:expr) => {
        match $self {
            Model::Ground($m) => $e,
            Model::Excited($m) => $e,
        }
    };
}

impl WaveModel for Model {
    fn kind(&self) -> ModelKind {
        delegate!(self, m => m.kind())
    }
    fn density(&self, x: f64, t: f64) -> f64 {
        delegate!(self, m => m.density(x, t))
    }
    fn density_dt(&self, x: f64, t: f64) -> f64 {
        delegate!(self, m => m.density_dt(x, t))
    }
    fn velocity(&self, x: f64, t: f64) -> Result<f64> {
        delegate!(self, m => m.velocity(x, t))
    }
    fn reference_density(&self, x: f64) -> f64 {
        delegate!(self, m => m.reference_density(x))
    }
    fn reference_cdf(&self, x: f64) -> f64 {
        delegate!(self, m => m.reference_cdf(x))
    }
    fn default_horizon(&self) -> f64 {
        delegate!(self, m => m.default_horizon())
    }
    fn well_center(&self, t: f64, side: Side) -> f64 {
        delegate!(self, m => m.well_center(t, side))
    }
}
