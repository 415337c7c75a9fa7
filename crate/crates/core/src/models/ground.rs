//! Ground state of the unit harmonic oscillator splitting into two Gaussians.
//!
//! R(x,t) = (4/pi)^(1/4) exp(-x^2/2) cosh(xt) / sqrt(exp(t^2) + 1),
//! S(x,t) = f(x,t) - t/2, with d_x f given in closed form through erf.
//!
//! Everything is evaluated in forms that never build exp(t^2), exp((x+t)^2)
//! or cosh(xt) directly, so the expressions stay finite for t up to 25.

use std::f64::consts::PI;

use super::{ModelKind, WaveModel};
use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate, QuadratureSpec};
use crate::numerics::special::{erf, erfcx, erfcx_derivative};

/// Largest time at which the stable velocity form is certified.
pub const MAX_TIME: f64 = 25.0;
/// The velocity is certified for |x| <= t + X_MARGIN.
pub const X_MARGIN: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStateSplit {
    quad: QuadratureSpec,
}

impl Default for GroundStateSplit {
    fn default() -> Self {
        Self::with_quadrature(QuadratureSpec::default())
    }
}

/// Pieces shared by v and d_t v for x >= 0.
struct Parts {
    tanh: f64,
    /// (1 + e^{-t^2}) (1 + e^{-2xt})^2
    d: f64,
    d_t: f64,
    /// e^{-(t^2 + 4xt)} [e^{(x+t)^2} (erf(t-x) + 2erf(x) - erf(t+x))]
    h: f64,
    h_t: f64,
}

fn parts(x: f64, t: f64) -> Parts {
    debug_assert!(x >= 0.0 && t >= 0.0);
    let xt = x * t;
    let e_t = (-t * t).exp();
    let e_x = (-2.0 * xt).exp();
    let d = (1.0 + e_t) * (1.0 + e_x) * (1.0 + e_x);
    let d_t = -2.0 * t * e_t * (1.0 + e_x) * (1.0 + e_x)
        - 4.0 * x * e_x * (1.0 + e_t) * (1.0 + e_x);

    let shift = (-t * t - 4.0 * xt).exp();
    let p1 = erfcx(x + t) * shift;
    let p1_t = (erfcx_derivative(x + t) - (2.0 * t + 4.0 * x) * erfcx(x + t)) * shift;

    // erf(t-x) - erf(t+x) + 2erf(x) = erfc(t+x) - erfc(t-x) + 2erf(x); for
    // x > t the last two terms are regrouped as erfc(x-t) - 2erfc(x).
    let (g, g_t) = if x <= t {
        let gauss = (x * x - 2.0 * xt).exp();
        let c = erfcx(t - x);
        (
            -c * e_t + 2.0 * erf(x) * gauss,
            -(erfcx_derivative(t - x) - 2.0 * t * c) * e_t - 4.0 * x * erf(x) * gauss,
        )
    } else {
        let c = erfcx(x - t);
        let cx = erfcx(x);
        (
            e_t * c - 2.0 * e_x * cx,
            -e_t * (2.0 * t * c + erfcx_derivative(x - t)) + 4.0 * x * e_x * cx,
        )
    };

    Parts {
        tanh: xt.tanh(),
        d,
        d_t,
        h: p1 + g,
        h_t: p1_t + g_t,
    }
}

impl GroundStateSplit {
    pub fn new() -> Self {
        Self::default()
    }

    /// Quadrature tolerances used for the phase f and for d_t f.
    pub fn with_quadrature(quad: QuadratureSpec) -> Self {
        GroundStateSplit { quad }
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quad
    }

    /// Whether the closed-form velocity is certified at (x, t).
    pub fn in_domain(x: f64, t: f64) -> bool {
        (0.0..=MAX_TIME).contains(&t) && x.abs() <= t + X_MARGIN
    }

    fn check_domain(x: f64, t: f64) -> Result<()> {
        if Self::in_domain(x, t) {
            Ok(())
        } else {
            Err(Error::DomainError {
                model: "ground",
                x,
                t,
            })
        }
    }

    /// Amplitude R(x, t).
    pub fn amplitude(&self, x: f64, t: f64) -> f64 {
        self.density(x, t).sqrt()
    }

    /// Guidance velocity without the domain check. Odd in x.
    pub fn velocity_unchecked(x: f64, t: f64) -> f64 {
        if t == 0.0 || x == 0.0 {
            return 0.0;
        }
        let p = parts(x.abs(), t);
        let v = p.tanh + PI.sqrt() * t * p.h / p.d;
        if x < 0.0 {
            -v
        } else {
            v
        }
    }

    /// d_t of the guidance velocity, the integrand of d_t f.
    pub fn velocity_dt_unchecked(x: f64, t: f64) -> f64 {
        let ax = x.abs();
        let p = parts(ax, t);
        let sech2 = 1.0 - p.tanh * p.tanh;
        let dv = ax * sech2 + PI.sqrt() * (p.h + t * p.h_t - t * p.h * p.d_t / p.d) / p.d;
        if x < 0.0 {
            -dv
        } else {
            dv
        }
    }

    /// d_t v with the domain check.
    pub fn velocity_dt(&self, x: f64, t: f64) -> Result<f64> {
        Self::check_domain(x, t)?;
        Ok(Self::velocity_dt_unchecked(x, t))
    }

    /// The phase function f(x, t) = integral_0^x v(y, t) dy, on the branch
    /// f(0, t) = 0.
    pub fn phase_f(&self, x: f64, t: f64) -> Result<f64> {
        Self::check_domain(x, t)?;
        Ok(integrate(|y| Self::velocity_unchecked(y, t), 0.0, x, &self.quad)?.value)
    }

    /// d_t f(x, t), differentiated under the integral sign.
    pub fn phase_f_dt(&self, x: f64, t: f64) -> Result<f64> {
        Self::check_domain(x, t)?;
        Ok(integrate(|y| Self::velocity_dt_unchecked(y, t), 0.0, x, &self.quad)?.value)
    }

    /// Full phase S = f - t/2.
    pub fn phase(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.phase_f(x, t)? - 0.5 * t)
    }

    /// External potential V(x,t) = (x^2+t^2)/2 - xt tanh(xt) - d_t f - (d_x f)^2/2.
    pub fn potential(&self, x: f64, t: f64) -> Result<f64> {
        let f_t = self.phase_f_dt(x, t)?;
        let v = Self::velocity_unchecked(x, t);
        let xt = x * t;
        Ok(0.5 * (x * x + t * t) - xt * xt.tanh() - f_t - 0.5 * v * v)
    }
}

impl WaveModel for GroundStateSplit {
    fn kind(&self) -> ModelKind {
        ModelKind::Ground
    }

    /// rho = s(t) [e^{-(x-t)^2} + e^{-(x+t)^2} + 2 e^{-x^2-t^2}] / (2 sqrt(pi))
    /// with s(t) = 1/(1 + e^{-t^2}).
    fn density(&self, x: f64, t: f64) -> f64 {
        let s = 1.0 / (1.0 + (-t * t).exp());
        let a = (-(x - t) * (x - t)).exp();
        let b = (-(x + t) * (x + t)).exp();
        let c = (-x * x - t * t).exp();
        s * (a + b + 2.0 * c) / (2.0 * PI.sqrt())
    }

    fn density_dt(&self, x: f64, t: f64) -> f64 {
        let e_t = (-t * t).exp();
        let s = 1.0 / (1.0 + e_t);
        let s_t = 2.0 * t * e_t * s * s;
        let a = (-(x - t) * (x - t)).exp();
        let b = (-(x + t) * (x + t)).exp();
        let c = (-x * x - t * t).exp();
        (s_t * (a + b + 2.0 * c) + s * (2.0 * (x - t) * a - 2.0 * (x + t) * b - 4.0 * t * c))
            / (2.0 * PI.sqrt())
    }

    fn velocity(&self, x: f64, t: f64) -> Result<f64> {
        Self::check_domain(x, t)?;
        Ok(Self::velocity_unchecked(x, t))
    }

    fn reference_density(&self, x: f64) -> f64 {
        (-x * x).exp() / PI.sqrt()
    }

    fn reference_cdf(&self, x: f64) -> f64 {
        0.5 * (1.0 + erf(x))
    }

    fn default_horizon(&self) -> f64 {
        20.0
    }
}
