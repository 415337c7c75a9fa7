//! Dormand-Prince 5(4) integrator for scalar first-order ODEs dx/dt = v(x, t).
//!
//! Standard DOPRI5 tableau with local extrapolation, an elementary step-size
//! controller and Hairer's fourth-order continuous extension for dense output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Solver tolerances and step bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub initial_step: f64,
    pub max_step: f64,
}

impl OdeSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, initial_step: f64, max_step: f64) -> Result<Self> {
        let spec = OdeSpec {
            abs_tol,
            rel_tol,
            initial_step,
            max_step,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [self.abs_tol, self.rel_tol, self.initial_step, self.max_step]
            .iter()
            .all(|v| *v > 0.0 && v.is_finite());
        if !positive || self.max_step < self.initial_step {
            return Err(Error::InvalidParameter(format!(
                "ODE spec needs positive tolerances and 0 < initial_step <= max_step (got {self:?})"
            )));
        }
        Ok(())
    }

    /// Both tolerances set to `tol`, steps unchanged.
    pub fn with_tolerance(self, tol: f64) -> Self {
        OdeSpec {
            abs_tol: tol,
            rel_tol: tol,
            ..self
        }
    }
}

impl Default for OdeSpec {
    fn default() -> Self {
        OdeSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            initial_step: 1e-3,
            max_step: 1.0,
        }
    }
}

/// One point of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
}

/// Time-ordered samples of one solution x(t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Whether intermediate points were retained, as opposed to only the
    /// two endpoints.
    pub dense: bool,
}

impl Trajectory {
    pub fn start(&self) -> Sample {
        self.samples[0]
    }

    pub fn end(&self) -> Sample {
        *self.samples.last().expect("trajectory has at least two samples")
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Which points of the solution to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// Start and end only.
    Endpoints,
    /// Every accepted step.
    Steps,
    /// `n >= 2` uniformly spaced times including both ends, from the
    /// continuous extension.
    Uniform(usize),
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Continuous extension over one accepted step.
struct Dense {
    t0: f64,
    h: f64,
    r: [f64; 5],
}

impl Dense {
    fn eval(&self, t: f64) -> f64 {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        self.r[0] + s * (self.r[1] + s1 * (self.r[2] + s * (self.r[3] + s1 * self.r[4])))
    }
}

/// Integrates dx/dt = v(x, t) from (t0, x0) to t1, keeping every accepted
/// step.
pub fn solve_ode<F>(v: F, x0: f64, t0: f64, t1: f64, spec: &OdeSpec) -> Result<Trajectory>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    solve_ode_sampled(v, x0, t0, t1, spec, Sampling::Steps)
}

/// Like [`solve_ode`] with a choice of output sampling. The last sample is
/// always at exactly `t1`.
pub fn solve_ode_sampled<F>(
    mut v: F,
    x0: f64,
    t0: f64,
    t1: f64,
    spec: &OdeSpec,
    sampling: Sampling,
) -> Result<Trajectory>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    spec.validate()?;
    if !(t1 > t0) {
        return Err(Error::InvalidParameter(format!(
            "integration interval must be increasing (t0 = {t0}, t1 = {t1})"
        )));
    }
    if let Sampling::Uniform(n) = sampling {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "uniform sampling needs at least 2 points (got {n})"
            )));
        }
    }
    if !x0.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite initial position {x0}")));
    }

    let span = t1 - t0;
    let uniform_time = |i: usize, n: usize| {
        if i + 1 == n {
            t1
        } else {
            t0 + span * (i as f64) / ((n - 1) as f64)
        }
    };

    let mut samples = vec![Sample { t: t0, x: x0 }];
    let mut next_uniform = 1usize;

    let mut t = t0;
    let mut x = x0;
    let mut k1 = v(x, t)?;
    let mut h = spec.initial_step.min(spec.max_step).min(span);
    let mut rejected_last = false;

    while t < t1 {
        let remaining = t1 - t;
        let last = h >= remaining * (1.0 - 1e-12);
        if last {
            h = remaining;
        }
        let h_min = 16.0 * f64::EPSILON * t.abs().max(1.0);
        if h < h_min {
            return Err(Error::StepFailure { t, x, h });
        }

        let k2 = v(x + h * A21 * k1, t + C2 * h)?;
        let k3 = v(x + h * (A31 * k1 + A32 * k2), t + C3 * h)?;
        let k4 = v(x + h * (A41 * k1 + A42 * k2 + A43 * k3), t + C4 * h)?;
        let k5 = v(x + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4), t + C5 * h)?;
        let t_new = if last { t1 } else { t + h };
        let k6 = v(
            x + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
            t_new,
        )?;
        let x_new = x + h * (A71 * k1 + A73 * k3 + A74 * k4 + A75 * k5 + A76 * k6);
        let k7 = v(x_new, t_new)?;

        let err_abs = (h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)).abs();
        let scale = spec.abs_tol + spec.rel_tol * x.abs().max(x_new.abs());
        let err = err_abs / scale;

        if !err.is_finite() || !x_new.is_finite() {
            h *= MIN_FACTOR;
            rejected_last = true;
            continue;
        }

        if err <= 1.0 {
            if let Sampling::Uniform(n) = sampling {
                let dense = Dense {
                    t0: t,
                    h,
                    r: {
                        let dx = x_new - x;
                        let bspl = h * k1 - dx;
                        [
                            x,
                            dx,
                            bspl,
                            dx - h * k7 - bspl,
                            h * (D1 * k1 + D3 * k3 + D4 * k4 + D5 * k5 + D6 * k6 + D7 * k7),
                        ]
                    },
                };
                while next_uniform < n - 1 && uniform_time(next_uniform, n) <= t_new {
                    let ts = uniform_time(next_uniform, n);
                    samples.push(Sample {
                        t: ts,
                        x: dense.eval(ts),
                    });
                    next_uniform += 1;
                }
            }

            t = t_new;
            x = x_new;
            k1 = k7;
            if sampling == Sampling::Steps && t < t1 {
                samples.push(Sample { t, x });
            }

            let mut factor = (SAFETY * err.max(1e-10).powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR);
            if rejected_last {
                factor = factor.min(1.0);
            }
            rejected_last = false;
            h = (h * factor).min(spec.max_step);
        } else {
            let factor = (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
            h *= factor;
            rejected_last = true;
        }
    }

    samples.push(Sample { t: t1, x });
    Ok(Trajectory {
        samples,
        dense: sampling != Sampling::Endpoints,
    })
}
