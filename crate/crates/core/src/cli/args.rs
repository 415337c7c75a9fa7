//! Command-line parsing. Flags override values from `--config`.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::{
    cmd_ensemble, cmd_figures, cmd_trajectories, cmd_verify, report_error, CliResult, RunConfig, DEFAULT_FAN,
    EXIT_USAGE,
};
use crate::models::ModelKind;

#[derive(Debug, Parser)]
#[command(name = "pilotwave", version, about = "Deterministic pilot-wave recurrence simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Residual checks of the model fields; exit 2 if any exceeds its threshold.
    Verify(Overrides),
    /// Recurrence chain(s), CSV + summary JSON (+ histogram SVG with --svg).
    Ensemble(Overrides),
    /// Trajectory fan over [0, horizon]; --x0 takes a comma-separated list.
    Trajectories(Overrides),
    /// All figure CSV/SVG pairs.
    Figures(Overrides),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Flat JSON configuration file.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = parse_model)]
    pub model: Option<ModelKind>,
    /// Initial position(s); several values run several chains or trajectories.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_list, default_value = "", hide_default_value = true)]
    pub x0: X0List,
    #[arg(long, allow_hyphen_values = true)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub recurrences: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub bin_width: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write SVG plots.
    #[arg(long)]
    pub svg: bool,
    /// Add a constant to the velocity (fault injection for `verify`).
    #[arg(long, hide = true)]
    pub debug_corrupt_velocity: bool,
}

/// Comma-separated initial positions.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct X0List(pub Vec<f64>);

fn parse_list(s: &str) -> Result<X0List, String> {
    if s.is_empty() {
        return Ok(X0List::default());
    }
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(X0List)
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

impl Overrides {
    /// The configuration file (or defaults) with these flags applied.
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(m) = self.model {
            cfg.model = m;
        }
        if let [x0] = self.x0.0[..] {
            cfg.x0 = x0;
        }
        if let Some(h) = self.horizon {
            cfg.horizon = Some(h);
        }
        if let Some(n) = self.recurrences {
            cfg.recurrences = n;
        }
        if let Some(w) = self.bin_width {
            cfg.bin_width = w;
        }
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        cfg.emit_svg |= self.svg;
        cfg.debug_corrupt_velocity |= self.debug_corrupt_velocity;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn dispatch(cmd: &Command) -> CliResult<super::Outcome> {
    match cmd {
        Command::Verify(o) => cmd_verify(&o.resolve()?),
        Command::Ensemble(o) => {
            let mut cfg = o.resolve()?;
            if o.x0.0.len() > 1 {
                cfg.parallel_chains = Some(o.x0.0.clone());
            }
            cmd_ensemble(&cfg)
        }
        Command::Trajectories(o) => {
            let cfg = o.resolve()?;
            let list = if !o.x0.0.is_empty() {
                o.x0.0.clone()
            } else {
                cfg.trajectory_x0.clone().unwrap_or_else(|| DEFAULT_FAN.to_vec())
            };
            cmd_trajectories(&cfg, &list)
        }
        Command::Figures(o) => cmd_figures(&o.resolve()?),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match dispatch(&cli.command) {
        Ok(outcome) => {
            for a in &outcome.artifacts {
                println!("{}", a.display());
            }
            outcome.exit_code
        }
        Err(err) => {
            report_error(&err);
            err.exit_code()
        }
    }
}
