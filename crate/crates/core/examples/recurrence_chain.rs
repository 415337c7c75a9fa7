//! The first recurrences of a ground-state chain started at x0 = 1.

use pilotwave::ensemble::run_chain;
use pilotwave::models::GroundStateSplit;
use pilotwave::numerics::ode::OdeSpec;

fn main() -> pilotwave::Result<()> {
    let chain = run_chain(&GroundStateSplit::new(), 1.0, 20.0, 20, &OdeSpec::default())?;
    println!("{:>3} {:>22} {:>6} {:>22}", "n", "relative position", "side", "x(T)");
    for r in &chain.records {
        println!("{:>3} {:>22.15} {:>6} {:>22.15}", r.index, r.relative_position, r.outcome, r.absolute_final);
    }
    Ok(())
}
