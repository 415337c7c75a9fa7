//! The recurrence map: integrate to the horizon, re-centre in the well the
//! particle ended up in, read LEFT/RIGHT, and use the relative position as
//! the next initial position.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ModelKind, Side, WaveModel};
use crate::numerics::ode::OdeSpec;
use crate::trajectories::{run_trajectory, TrajectoryRequest};

/// A LEFT/RIGHT reading. LEFT iff the relative position is negative.
pub type MeasurementOutcome = Side;

/// Steps between progress log lines in [`run_chain`].
pub const PROGRESS_INTERVAL: usize = 10_000;

/// One recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceRecord {
    pub index: usize,
    pub relative_position: f64,
    pub outcome: MeasurementOutcome,
    /// x(T) before re-centring.
    pub absolute_final: f64,
}

/// Where and why a chain stopped early.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    /// Index of the step that failed.
    pub index: usize,
    pub cause: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceChain {
    pub model: ModelKind,
    pub x0: f64,
    pub horizon: f64,
    pub ode: OdeSpec,
    pub requested: usize,
    pub records: Vec<RecurrenceRecord>,
    pub truncation: Option<Truncation>,
}

impl RecurrenceChain {
    pub fn positions(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.relative_position).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.truncation.is_none() && self.records.len() == self.requested
    }
}

/// One application of the recurrence map, starting from `x_in` at t = 0.
/// The returned record has index 0.
pub fn step_recurrence<M: WaveModel + ?Sized>(
    model: &M,
    x_in: f64,
    horizon: f64,
    ode: &OdeSpec,
) -> Result<RecurrenceRecord> {
    if x_in == 0.0 {
        return Err(Error::DegenerateEquilibrium);
    }
    if !(horizon > 0.0) {
        return Err(Error::InvalidParameter(format!("horizon must be positive (got {horizon})")));
    }
    let tr = run_trajectory(model, &TrajectoryRequest::endpoints(x_in, horizon, *ode))?;
    let x_t = tr.end().x;
    let side = Side::of(x_t);
    let relative_position = x_t - model.well_center(horizon, side);
    Ok(RecurrenceRecord {
        index: 0,
        relative_position,
        outcome: Side::of(relative_position),
        absolute_final: x_t,
    })
}

/// Iterates [`step_recurrence`] `count` times from `x0`. A failing step ends
/// the chain; the records before it are kept and the cause is recorded.
pub fn run_chain<M: WaveModel + ?Sized>(
    model: &M,
    x0: f64,
    horizon: f64,
    count: usize,
    ode: &OdeSpec,
) -> Result<RecurrenceChain> {
    if count < 1 {
        return Err(Error::InvalidParameter("chain length must be at least 1".into()));
    }
    if x0 == 0.0 {
        return Err(Error::DegenerateEquilibrium);
    }
    ode.validate()?;
    let mut records = Vec::with_capacity(count);
    let mut truncation = None;
    let mut x = x0;
    for index in 0..count {
        match step_recurrence(model, x, horizon, ode) {
            Ok(mut rec) => {
                rec.index = index;
                x = rec.relative_position;
                records.push(rec);
            }
            Err(e) => {
                log::warn!("{} chain from x0 = {x0} truncated at step {index}: {e}", model.kind());
                truncation = Some(Truncation {
                    index,
                    cause: e.to_string(),
                });
                break;
            }
        }
        if (index + 1) % PROGRESS_INTERVAL == 0 {
            log::info!("{} chain from x0 = {x0}: {}/{count} recurrences", model.kind(), index + 1);
        }
    }
    Ok(RecurrenceChain {
        model: model.kind(),
        x0,
        horizon,
        ode: *ode,
        requested: count,
        records,
        truncation,
    })
}

/// The LEFT/RIGHT readings of a chain, in order.
pub fn outcome_sequence(chain: &RecurrenceChain) -> Vec<MeasurementOutcome> {
    chain.records.iter().map(|r| r.outcome).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Model;

    fn ground() -> Model {
        Model::from_kind(ModelKind::Ground)
    }

    #[test]
    fn first_step_from_one() {
        let m = ground();
        let rec = step_recurrence(&m, 1.0, 20.0, &OdeSpec::default()).unwrap();
        assert!(rec.absolute_final > 0.0);
        assert_eq!(rec.relative_position, rec.absolute_final - 20.0);
        assert_eq!(rec.outcome, Side::of(rec.relative_position));
    }

    #[test]
    fn mirror_step() {
        let m = ground();
        let ode = OdeSpec::default();
        let a = step_recurrence(&m, 0.7, 20.0, &ode).unwrap();
        let b = step_recurrence(&m, -0.7, 20.0, &ode).unwrap();
        assert_eq!(a.relative_position, -b.relative_position);
        assert_eq!(a.outcome, b.outcome.flipped());
    }

    #[test]
    fn degenerate_start() {
        let m = ground();
        assert_eq!(step_recurrence(&m, 0.0, 20.0, &OdeSpec::default()), Err(Error::DegenerateEquilibrium));
        assert!(run_chain(&m, 0.0, 20.0, 3, &OdeSpec::default()).is_err());
    }

    #[test]
    fn single_step_chain_matches_step() {
        let m = ground();
        let ode = OdeSpec::default();
        let chain = run_chain(&m, 1.0, 20.0, 1, &ode).unwrap();
        assert_eq!(chain.records, vec![step_recurrence(&m, 1.0, 20.0, &ode).unwrap()]);
        assert!(chain.is_complete());
    }

    #[test]
    fn seeds_chain_into_next_step() {
        let m = ground();
        let ode = OdeSpec::default();
        let chain = run_chain(&m, 1.0, 20.0, 30, &ode).unwrap();
        for w in chain.records.windows(2) {
            let mut again = step_recurrence(&m, w[0].relative_position, 20.0, &ode).unwrap();
            again.index = w[1].index;
            assert_eq!(again, w[1]);
        }
        assert!(chain.records.iter().all(|r| r.relative_position.abs() < 5.0));
    }

    #[test]
    fn excited_chain_truncates_past_split_time() {
        let m = Model::from_kind(ModelKind::Excited);
        let chain = run_chain(&m, 1.0, 10.5, 5, &OdeSpec::default()).unwrap();
        assert!(chain.records.is_empty());
        assert_eq!(chain.truncation.as_ref().unwrap().index, 0);
        assert!(!chain.is_complete());
    }

    #[test]
    fn outcome_projection() {
        let rec = |i, x: f64| RecurrenceRecord {
            index: i,
            relative_position: x,
            outcome: Side::of(x),
            absolute_final: x,
        };
        let mut chain = RecurrenceChain {
            model: ModelKind::Ground,
            x0: 1.0,
            horizon: 20.0,
            ode: OdeSpec::default(),
            requested: 3,
            records: vec![rec(0, -0.3), rec(1, 0.7), rec(2, -1.2)],
            truncation: None,
        };
        assert_eq!(outcome_sequence(&chain), vec![Side::Left, Side::Right, Side::Left]);
        chain.records.clear();
        assert!(outcome_sequence(&chain).is_empty());
    }
}
