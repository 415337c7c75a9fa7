//! First-excited-state trajectories: two branches separated by the node.

use pilotwave::models::{ExcitedStateSplit, WaveModel};
use pilotwave::numerics::ode::OdeSpec;
use pilotwave::trajectories::trajectory_fan;

fn main() {
    let model = ExcitedStateSplit::new();
    let t = model.default_horizon();
    let x0 = [-2.0, -1.0, -0.25, 0.25, 1.0, 2.0];
    let fan = trajectory_fan(&model, &x0, (0.0, t), &OdeSpec::default(), 2);
    for entry in &fan {
        match &entry.result {
            Ok(traj) => println!("x0 = {:>5}  ->  x({t}) = {:>9.5}", entry.x0, traj.end().x),
            Err(e) => println!("x0 = {:>5}  failed: {e}", entry.x0),
        }
    }
    println!("v(1, 3) = {:.6}", model.velocity(1.0, 3.0).unwrap());
}
