//! Residuals of the continuity and Schrodinger equations on the default grids.

use pilotwave::models::{ExcitedStateSplit, GroundStateSplit, ModelKind};
use pilotwave::verify::{
    continuity_grid, continuity_residual, crosscheck_grid, schrodinger_grid, schrodinger_residual_gs,
    velocity_crosscheck_gs, CONTINUITY_STEP, SCHRODINGER_STEP_T, SCHRODINGER_STEP_X,
};

fn main() -> pilotwave::Result<()> {
    let ground = GroundStateSplit::new();
    let excited = ExcitedStateSplit::new();
    let reports = [
        continuity_residual(&ground, continuity_grid(ModelKind::Ground), CONTINUITY_STEP)?,
        continuity_residual(&excited, continuity_grid(ModelKind::Excited), CONTINUITY_STEP)?,
        schrodinger_residual_gs(&ground, schrodinger_grid(), SCHRODINGER_STEP_X, SCHRODINGER_STEP_T)?,
        velocity_crosscheck_gs(&ground, crosscheck_grid())?,
    ];
    for r in &reports {
        println!(
            "{:<40} max {:.3e} at (x, t) = ({:.2}, {:.2}), {} points",
            r.name, r.max_abs_residual, r.location.0, r.location.1, r.points_evaluated
        );
        for c in &r.breakdown {
            println!("    {:<36} {:.3e}", c.name, c.max_abs);
        }
    }
    Ok(())
}
