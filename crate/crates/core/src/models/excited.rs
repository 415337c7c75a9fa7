//! First excited state splitting into two first-excited packets that are
//! re-formed (almost exactly) at the split time tau.
//!
//! With a = exp(-(x-t)^2/2), b = exp(-(x+t)^2/2) the unnormalised amplitude
//! has real part t(a(x-t) + b(x+t)) and imaginary part (tau-t) x (a+b). The
//! guidance velocity is not available in closed form; it follows from the
//! continuity equation by quadrature of the analytic d_t rho.

use std::f64::consts::PI;

use super::{continuity_velocity_with, ModelKind, WaveModel};
use crate::error::{Error, Result};
use crate::numerics::quadrature::QuadratureSpec;
use crate::numerics::special::erf;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcitedStateSplit {
    split_time: f64,
    quad: QuadratureSpec,
}

impl Default for ExcitedStateSplit {
    fn default() -> Self {
        Self::with_quadrature(QuadratureSpec::default())
    }
}

/// Normalisation integral of |amplitude|^2 and its time derivative.
#[derive(Debug, Clone, Copy)]
struct Norm {
    z: f64,
    z_t: f64,
}

impl ExcitedStateSplit {
    pub const DEFAULT_SPLIT_TIME: f64 = 10.0;

    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_quadrature(quad: QuadratureSpec) -> Self {
        ExcitedStateSplit {
            split_time: Self::DEFAULT_SPLIT_TIME,
            quad,
        }
    }

    pub fn with_split_time(split_time: f64, quad: QuadratureSpec) -> Result<Self> {
        if !(split_time > 0.0) || !split_time.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "split time must be positive (got {split_time})"
            )));
        }
        Ok(ExcitedStateSplit { split_time, quad })
    }

    pub fn split_time(&self) -> f64 {
        self.split_time
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quad
    }

    pub fn amplitude(&self, x: f64, t: f64) -> f64 {
        self.density(x, t).sqrt()
    }

    /// sqrt(pi) [t^2 (1 + e^{-t^2}(1-2t^2)) + (tau-t)^2 (1 + 2t^2 + e^{-t^2})]
    fn norm(&self, t: f64) -> Norm {
        let tau = self.split_time;
        let e = (-t * t).exp();
        let t2 = t * t;
        let w = tau - t;
        let first = t2 * (1.0 + e * (1.0 - 2.0 * t2));
        let second = w * w * (1.0 + 2.0 * t2 + e);
        let first_t = 2.0 * t * (1.0 + e * (1.0 - 2.0 * t2)) + t2 * (-2.0 * t * e * (1.0 - 2.0 * t2) - 4.0 * t * e);
        let second_t = -2.0 * w * (1.0 + 2.0 * t2 + e) + w * w * (4.0 * t - 2.0 * t * e);
        Norm {
            z: PI.sqrt() * (first + second),
            z_t: PI.sqrt() * (first_t + second_t),
        }
    }

    /// (re, im, d_t re, d_t im) of the unnormalised amplitude.
    fn amplitude_parts(&self, x: f64, t: f64) -> [f64; 4] {
        let tau = self.split_time;
        let u = x - t;
        let w = x + t;
        let a = (-0.5 * u * u).exp();
        let b = (-0.5 * w * w).exp();
        let re = t * (a * u + b * w);
        let im = (tau - t) * x * (a + b);
        let re_t = (a * u + b * w) + t * (a * (u * u - 1.0) + b * (1.0 - w * w));
        let im_t = -x * (a + b) + (tau - t) * x * (a * u - b * w);
        [re, im, re_t, im_t]
    }

    fn density_with(&self, x: f64, t: f64, norm: &Norm) -> f64 {
        let [re, im, _, _] = self.amplitude_parts(x, t);
        (re * re + im * im) / norm.z
    }

    fn density_dt_with(&self, x: f64, t: f64, norm: &Norm) -> f64 {
        let [re, im, re_t, im_t] = self.amplitude_parts(x, t);
        let sq = re * re + im * im;
        (2.0 * (re * re_t + im * im_t) - sq * norm.z_t / norm.z) / norm.z
    }

    fn check_time(&self, x: f64, t: f64) -> Result<()> {
        if (0.0..=self.split_time).contains(&t) {
            Ok(())
        } else {
            Err(Error::DomainError {
                model: "excited",
                x,
                t,
            })
        }
    }

    /// Continuity velocity with explicit quadrature tolerances.
    pub fn velocity_with(&self, x: f64, t: f64, quad: &QuadratureSpec) -> Result<f64> {
        self.check_time(x, t)?;
        let norm = self.norm(t);
        continuity_velocity_with(
            |y| self.density_with(y, t, &norm),
            |y| self.density_dt_with(y, t, &norm),
            x,
            t,
            quad,
        )
    }
}

impl WaveModel for ExcitedStateSplit {
    fn kind(&self) -> ModelKind {
        ModelKind::Excited
    }

    fn density(&self, x: f64, t: f64) -> f64 {
        self.density_with(x, t, &self.norm(t))
    }

    fn density_dt(&self, x: f64, t: f64) -> f64 {
        self.density_dt_with(x, t, &self.norm(t))
    }

    /// Zero at the node x = 0; `NodeSingularity` where rho < 1e-300
    /// elsewhere; `DomainError` outside 0 <= t <= tau.
    fn velocity(&self, x: f64, t: f64) -> Result<f64> {
        self.velocity_with(x, t, &self.quad)
    }

    fn reference_density(&self, x: f64) -> f64 {
        2.0 * x * x * (-x * x).exp() / PI.sqrt()
    }

    fn reference_cdf(&self, x: f64) -> f64 {
        0.5 * (1.0 + erf(x)) - x * (-x * x).exp() / PI.sqrt()
    }

    fn default_horizon(&self) -> f64 {
        self.split_time
    }
}
