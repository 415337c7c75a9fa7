//! Histogram of a recurrence chain against |psi(x, 0)|^2.
//!
//! `cargo run --release --example born_histogram -- [ground|excited] [n]`

use pilotwave::ensemble::{outcome_sequence, run_chain};
use pilotwave::models::{Model, ModelKind, WaveModel};
use pilotwave::numerics::ode::OdeSpec;
use pilotwave::stats::{build_histogram, compare_to_model, outcome_fractions, to_pdf, DEFAULT_BIN_WIDTH};

fn main() -> pilotwave::Result<()> {
    let mut args = std::env::args().skip(1);
    let kind: ModelKind = args.next().as_deref().unwrap_or("ground").parse()?;
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let model = Model::from_kind(kind);

    let chain = run_chain(&model, 1.0, model.default_horizon(), n, &OdeSpec::default())?;
    let h = build_histogram(&chain.positions(), DEFAULT_BIN_WIDTH)?;
    let cmp = compare_to_model(&h, &model)?;
    let (left, right) = outcome_fractions(&outcome_sequence(&chain))?;

    for (c, d) in to_pdf(&h).into_iter().filter(|(c, _)| c.abs() < 3.0) {
        let bar = "#".repeat((d * 80.0).round() as usize);
        println!("{c:>6.2} {d:.4} {:.4} {bar}", model.reference_density(c));
    }
    println!("n = {}  l1 = {:.4}  KS = {:.4}  chi2 = {:.1} on {} bins", cmp.n, cmp.l1, cmp.ks, cmp.chi2, cmp.chi2_bins);
    println!("LEFT {left:.4}  RIGHT {right:.4}");
    Ok(())
}
