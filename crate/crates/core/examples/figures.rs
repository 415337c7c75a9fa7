//! Writes every figure CSV/SVG pair into a directory (default `figures_out`).

use std::path::PathBuf;

use pilotwave::cli::{cmd_figures, RunConfig};

fn main() {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| "figures_out".into());
    let cfg = RunConfig {
        recurrences: 2_000,
        out,
        ..RunConfig::default()
    };
    match cmd_figures(&cfg) {
        Ok(outcome) => outcome.artifacts.iter().for_each(|p| println!("{}", p.display())),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
