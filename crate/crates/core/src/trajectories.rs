//! Single trajectories of the guidance equation dx/dt = v(x, t) and fans of
//! them over a list of initial positions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::WaveModel;
use crate::numerics::ode::{solve_ode_sampled, OdeSpec, Sampling, Trajectory};

/// Samples kept per trajectory for figure output.
pub const DEFAULT_SAMPLE_COUNT: usize = 201;

/// What to integrate: start position, time span, solver tolerances and the
/// number of uniformly spaced output samples (2 keeps only the endpoints).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRequest {
    pub x0: f64,
    pub t_span: (f64, f64),
    pub ode: OdeSpec,
    pub sample_count: usize,
}

impl TrajectoryRequest {
    pub fn new(x0: f64, t_span: (f64, f64)) -> Self {
        TrajectoryRequest {
            x0,
            t_span,
            ode: OdeSpec::default(),
            sample_count: DEFAULT_SAMPLE_COUNT,
        }
    }

    pub fn with_ode(self, ode: OdeSpec) -> Self {
        TrajectoryRequest { ode, ..self }
    }

    pub fn with_sample_count(self, sample_count: usize) -> Self {
        TrajectoryRequest {
            sample_count,
            ..self
        }
    }

    /// Endpoint-only request, as used by the recurrence map.
    pub fn endpoints(x0: f64, horizon: f64, ode: OdeSpec) -> Self {
        TrajectoryRequest {
            x0,
            t_span: (0.0, horizon),
            ode,
            sample_count: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (t0, t1) = self.t_span;
        if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "time span must be increasing and finite (got [{t0}, {t1}])"
            )));
        }
        if self.sample_count < 2 {
            return Err(Error::InvalidParameter(format!(
                "sample_count must be at least 2 (got {})",
                self.sample_count
            )));
        }
        if !self.x0.is_finite() {
            return Err(Error::InvalidParameter(format!("x0 must be finite (got {})", self.x0)));
        }
        self.ode.validate()
    }
}

/// Integrates one trajectory of `model`.
pub fn run_trajectory<M: WaveModel + ?Sized>(model: &M, req: &TrajectoryRequest) -> Result<Trajectory> {
    req.validate()?;
    let sampling = if req.sample_count == 2 {
        Sampling::Endpoints
    } else {
        Sampling::Uniform(req.sample_count)
    };
    let (t0, t1) = req.t_span;
    solve_ode_sampled(|x, t| model.velocity(x, t), req.x0, t0, t1, &req.ode, sampling)
}

/// One entry of a fan: the initial position and what became of it.
#[derive(Debug, Clone, PartialEq)]
pub struct FanEntry {
    pub x0: f64,
    pub result: Result<Trajectory>,
}

/// Integrates one trajectory per entry of `x0_list`, in parallel, with
/// `sample_count` output samples each. Output order follows `x0_list`.
pub fn trajectory_fan<M: WaveModel + ?Sized>(
    model: &M,
    x0_list: &[f64],
    t_span: (f64, f64),
    ode: &OdeSpec,
    sample_count: usize,
) -> Vec<FanEntry> {
    x0_list
        .par_iter()
        .map(|&x0| {
            let req = TrajectoryRequest {
                x0,
                t_span,
                ode: *ode,
                sample_count,
            };
            FanEntry {
                x0,
                result: run_trajectory(model, &req),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Model, ModelKind};

    fn ground() -> Model {
        Model::from_kind(ModelKind::Ground)
    }

    #[test]
    fn equilibrium_stays_at_rest() {
        let tr = run_trajectory(&ground(), &TrajectoryRequest::new(0.0, (0.0, 20.0))).unwrap();
        assert!(tr.samples.iter().all(|s| s.x == 0.0));
        assert_eq!(tr.len(), DEFAULT_SAMPLE_COUNT);
        assert_eq!(tr.end().t, 20.0);
    }

    #[test]
    fn reaches_unit_speed() {
        let m = ground();
        let tr = run_trajectory(&m, &TrajectoryRequest::new(1.0, (0.0, 20.0))).unwrap();
        let end = tr.end();
        assert!((m.velocity(end.x, end.t).unwrap() - 1.0).abs() < 0.01);
    }

    #[test]
    fn mirror_pairs() {
        let m = ground();
        let a = run_trajectory(&m, &TrajectoryRequest::new(0.8, (0.0, 20.0))).unwrap();
        let b = run_trajectory(&m, &TrajectoryRequest::new(-0.8, (0.0, 20.0))).unwrap();
        for (p, q) in a.samples.iter().zip(&b.samples) {
            assert_eq!(p.t, q.t);
            assert!((p.x + q.x).abs() < 1e-9);
        }
    }

    #[test]
    fn endpoint_mode_keeps_two_samples() {
        let m = ground();
        let tr = run_trajectory(&m, &TrajectoryRequest::endpoints(1.0, 20.0, OdeSpec::default())).unwrap();
        assert_eq!(tr.len(), 2);
        assert!(!tr.dense);
        let dense = run_trajectory(&m, &TrajectoryRequest::new(1.0, (0.0, 20.0))).unwrap();
        assert!((dense.end().x - tr.end().x).abs() < 1e-12);
    }

    #[test]
    fn fan_preserves_order_and_reports_errors_per_entry() {
        let m = Model::from_kind(ModelKind::Excited);
        let fan = trajectory_fan(&m, &[0.5, 1.0], (0.0, 12.0), &OdeSpec::default(), 11);
        assert_eq!(fan.len(), 2);
        assert_eq!(fan[0].x0, 0.5);
        assert!(matches!(fan[0].result, Err(Error::DomainError { .. })));
        assert!(trajectory_fan(&m, &[], (0.0, 10.0), &OdeSpec::default(), 11).is_empty());
    }

    #[test]
    fn invalid_requests() {
        let m = ground();
        assert!(run_trajectory(&m, &TrajectoryRequest::new(1.0, (1.0, 1.0))).is_err());
        assert!(run_trajectory(&m, &TrajectoryRequest::new(1.0, (0.0, 1.0)).with_sample_count(1)).is_err());
    }
}
