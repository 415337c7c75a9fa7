//! Residual checks that the implemented fields solve the equations they come
//! from: continuity for both models, the Schrödinger equation with the
//! reconstructed potential for the ground model, and the closed-form ground
//! velocity against the continuity-quadrature construction.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::models::{continuity_velocity, GroundStateSplit, ModelKind, WaveModel};
use crate::numerics::diff::{windowed_diff, Order};
use crate::numerics::quadrature::{integrate, QuadratureSpec};

/// Densities below this are node neighbourhoods and are skipped.
pub const DENSITY_FLOOR: f64 = 1e-12;

pub const CONTINUITY_STEP: f64 = 1e-3;
pub const SCHRODINGER_STEP_X: f64 = 2e-3;
pub const SCHRODINGER_STEP_T: f64 = 1e-3;

/// Evenly spaced points from `lo` to `hi`; `hi` is always included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, step: f64) -> Self {
        Axis { lo, hi, step }
    }

    pub fn points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut i = 0u32;
        loop {
            let p = self.lo + i as f64 * self.step;
            if p >= self.hi - 1e-9 * self.step {
                break;
            }
            out.push(p);
            i += 1;
        }
        out.push(self.hi);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x: Axis,
    pub t: Axis,
}

impl Grid {
    pub fn new(x: Axis, t: Axis) -> Self {
        Grid { x, t }
    }

    fn points(&self) -> Vec<(f64, f64)> {
        let xs = self.x.points();
        self.t
            .points()
            .into_iter()
            .flat_map(|t| xs.iter().map(move |&x| (x, t)))
            .collect()
    }
}

/// Maximum of one residual component over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentResidual {
    pub name: String,
    pub max_abs: f64,
    pub location: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub name: String,
    pub grid: Grid,
    /// Finite-difference steps (x, t) where applicable.
    pub steps: Option<(f64, f64)>,
    pub max_abs_residual: f64,
    pub location: (f64, f64),
    pub points_evaluated: usize,
    pub points_skipped: usize,
    pub breakdown: Vec<ComponentResidual>,
}

impl ResidualReport {
    pub fn below(&self, threshold: f64) -> bool {
        self.max_abs_residual < threshold
    }
}

/// Per-point values: Some([total, components...]) or None when skipped.
fn reduce(
    name: &str,
    grid: Grid,
    steps: Option<(f64, f64)>,
    components: &[&str],
    values: Vec<((f64, f64), Option<Vec<f64>>)>,
) -> ResidualReport {
    let mut best = vec![(0.0f64, (grid.x.lo, grid.t.lo)); components.len() + 1];
    let mut evaluated = 0;
    let mut skipped = 0;
    for (at, v) in values {
        match v {
            Some(v) => {
                evaluated += 1;
                for (slot, r) in best.iter_mut().zip(v) {
                    if r.abs() > slot.0 || r.is_nan() {
                        *slot = (r.abs(), at);
                    }
                }
            }
            None => skipped += 1,
        }
    }
    ResidualReport {
        name: name.to_string(),
        grid,
        steps,
        max_abs_residual: best[0].0,
        location: best[0].1,
        points_evaluated: evaluated,
        points_skipped: skipped,
        breakdown: components
            .iter()
            .zip(&best[1..])
            .map(|(n, &(max_abs, location))| ComponentResidual {
                name: n.to_string(),
                max_abs,
                location,
            })
            .collect(),
    }
}

/// Model wrapper with a constant added to the velocity, for checking that
/// the residuals detect faults.
#[derive(Debug, Clone)]
pub struct VelocityOffset<M> {
    pub inner: M,
    pub offset: f64,
}

impl<M: WaveModel> WaveModel for VelocityOffset<M> {
    fn kind(&self) -> ModelKind {
        self.inner.kind()
    }
    fn density(&self, x: f64, t: f64) -> f64 {
        self.inner.density(x, t)
    }
    fn density_dt(&self, x: f64, t: f64) -> f64 {
        self.inner.density_dt(x, t)
    }
    fn velocity(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.inner.velocity(x, t)? + self.offset)
    }
    fn reference_density(&self, x: f64) -> f64 {
        self.inner.reference_density(x)
    }
    fn reference_cdf(&self, x: f64) -> f64 {
        self.inner.reference_cdf(x)
    }
    fn default_horizon(&self) -> f64 {
        self.inner.default_horizon()
    }
}

/// Default grid for [`continuity_residual`].
pub fn continuity_grid(kind: ModelKind) -> Grid {
    match kind {
        ModelKind::Ground => Grid::new(Axis::new(-8.0, 8.0, 0.05), Axis::new(0.5, 15.0, 0.5)),
        ModelKind::Excited => Grid::new(Axis::new(-14.0, 14.0, 0.05), Axis::new(0.5, 10.0, 0.5)),
    }
}

/// max |d_t rho + d_x (rho v)| with both derivatives taken by fourth-order
/// differences of step `h`. Points with rho < 1e-12 are skipped. The
/// breakdown also compares the finite-difference d_t rho with the model's
/// analytic one.
pub fn continuity_residual<M: WaveModel + ?Sized>(model: &M, grid: Grid, h: f64) -> Result<ResidualReport> {
    let t_hi = match model.kind() {
        ModelKind::Ground => f64::INFINITY,
        ModelKind::Excited => model.default_horizon(),
    };
    let mut values = Vec::new();
    for (x, t) in grid.points() {
        if model.density(x, t) < DENSITY_FLOOR {
            values.push(((x, t), None));
            continue;
        }
        let mut flux = [0.0; 5];
        for (i, slot) in flux.iter_mut().enumerate() {
            let y = x + (i as f64 - 2.0) * h;
            *slot = model.density(y, t) * model.velocity(y, t)?;
        }
        let flux_dx = (flux[0] - 8.0 * flux[1] + 8.0 * flux[3] - flux[4]) / (12.0 * h);
        let rho_t = windowed_diff(|s| model.density(x, s), t, h, Order::First, 0.0, t_hi);
        values.push((
            (x, t),
            Some(vec![rho_t + flux_dx, rho_t - model.density_dt(x, t)]),
        ));
    }
    Ok(reduce(
        &format!("continuity ({})", model.kind()),
        grid,
        Some((h, h)),
        &["analytic d_t rho vs finite difference"],
        values,
    ))
}

/// Default grid for [`schrodinger_residual_gs`].
pub fn schrodinger_grid() -> Grid {
    Grid::new(Axis::new(-6.0, 6.0, 0.1), Axis::new(0.5, 5.0, 0.25))
}

/// Relative Schrödinger residual |i d_t psi + psi''/2 - V psi| / |psi| of
/// the ground model with psi = R exp(i (f - t/2)) and V from
/// [`GroundStateSplit::potential`].
///
/// Around each grid point psi is rebuilt from phase increments relative to
/// the centre, so the stencils see no absolute quadrature noise in f. The
/// breakdown splits the residual / psi into its real part (quantum
/// Hamilton-Jacobi) and imaginary part (continuity / 2 rho).
pub fn schrodinger_residual_gs(model: &GroundStateSplit, grid: Grid, h_x: f64, h_t: f64) -> Result<ResidualReport> {
    schrodinger_residual_with_offset(model, grid, h_x, h_t, 0.0)
}

/// [`schrodinger_residual_gs`] with `potential_offset` added to V.
pub fn schrodinger_residual_with_offset(
    model: &GroundStateSplit,
    grid: Grid,
    h_x: f64,
    h_t: f64,
    potential_offset: f64,
) -> Result<ResidualReport> {
    let quad = QuadratureSpec::new(1e-15, 1e-14, 400)?;
    let mut values = Vec::new();
    for (x, t) in grid.points() {
        let r0 = model.amplitude(x, t);
        if r0 * r0 < DENSITY_FLOOR {
            values.push(((x, t), None));
            continue;
        }

        // spatial neighbours: phase increment integral_x^y v(., t)
        let mut sx = [(0.0, 0.0); 5];
        for (i, slot) in sx.iter_mut().enumerate() {
            let y = x + (i as f64 - 2.0) * h_x;
            let df = integrate(|z| GroundStateSplit::velocity_unchecked(z, t), x, y, &quad)?.value;
            let r = model.amplitude(y, t) / r0;
            *slot = (r * df.cos(), r * df.sin());
        }
        let lap = |k: usize| {
            let v = |i: usize| if k == 0 { sx[i].0 } else { sx[i].1 };
            (-v(0) + 16.0 * v(1) - 30.0 * v(2) + 16.0 * v(3) - v(4)) / (12.0 * h_x * h_x)
        };
        let (lap_re, lap_im) = (lap(0), lap(1));

        // temporal neighbours: integral_0^x [v(., s) - v(., t)] - (s - t)/2
        let psi_t_part = |part: usize| -> Result<f64> {
            let err = std::cell::Cell::new(None);
            let d = windowed_diff(
                |s| {
                    let df = if s == t {
                        Ok(0.0)
                    } else {
                        integrate(
                            |z| GroundStateSplit::velocity_unchecked(z, s) - GroundStateSplit::velocity_unchecked(z, t),
                            0.0,
                            x,
                            &quad,
                        )
                        .map(|q| q.value)
                    };
                    let df = match df {
                        Ok(v) => v,
                        Err(e) => {
                            err.set(Some(e));
                            0.0
                        }
                    };
                    let phase = df - 0.5 * (s - t);
                    let r = model.amplitude(x, s) / r0;
                    if part == 0 {
                        r * phase.cos()
                    } else {
                        r * phase.sin()
                    }
                },
                t,
                h_t,
                Order::First,
                0.0,
                f64::INFINITY,
            );
            match err.into_inner() {
                Some(e) => Err(e),
                None => Ok(d),
            }
        };
        let (dt_re, dt_im) = (psi_t_part(0)?, psi_t_part(1)?);

        let v_pot = model.potential(x, t)? + potential_offset;
        // (i d_t + d_xx/2 - V) psi / psi with the centre value psi/psi = 1
        let re = -dt_im + 0.5 * lap_re - v_pot;
        let im = dt_re + 0.5 * lap_im;
        values.push(((x, t), Some(vec![re.hypot(im), re, im])));
    }
    Ok(reduce(
        "schrodinger (ground)",
        grid,
        Some((h_x, h_t)),
        &["hamilton-jacobi (real part)", "continuity (imaginary part)"],
        values,
    ))
}

/// Default grid for [`velocity_crosscheck_gs`].
pub fn crosscheck_grid() -> Grid {
    Grid::new(Axis::new(-10.0, 10.0, 0.25), Axis::new(0.1, 20.0, 0.5))
}

/// max |closed-form v - (-(1/rho) integral_0^x d_t rho)| for the ground
/// model, the integral by adaptive quadrature.
pub fn velocity_crosscheck_gs(model: &GroundStateSplit, grid: Grid) -> Result<ResidualReport> {
    let quad = QuadratureSpec::new(1e-13, 1e-13, 400)?;
    let mut values = Vec::new();
    for (x, t) in grid.points() {
        let closed = model.velocity(x, t)?;
        let quadrature = continuity_velocity(model, x, t, &quad)?;
        values.push(((x, t), Some(vec![closed - quadrature])));
    }
    Ok(reduce("velocity cross-check (ground)", grid, None, &[], values))
}
