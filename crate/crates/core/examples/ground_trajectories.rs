//! A ground-state trajectory fan, including the equilibrium at x = 0.

use pilotwave::models::GroundStateSplit;
use pilotwave::numerics::ode::OdeSpec;
use pilotwave::trajectories::trajectory_fan;

fn main() {
    let model = GroundStateSplit::new();
    let x0 = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
    let fan = trajectory_fan(&model, &x0, (0.0, 20.0), &OdeSpec::default(), 5);
    println!("{:>6} {:>10} {:>10} {:>10} {:>10} {:>10}", "x0", "t=0", "t=5", "t=10", "t=15", "t=20");
    for entry in &fan {
        let traj = entry.result.as_ref().expect("ground trajectories stay in the certified domain");
        print!("{:>6}", entry.x0);
        for s in &traj.samples {
            print!(" {:>10.5}", s.x);
        }
        println!();
    }
}
