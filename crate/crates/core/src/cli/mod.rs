//! Operator surface: a flat JSON [`RunConfig`], the `verify`, `ensemble`,
//! `trajectories` and `figures` commands, and their CSV / JSON / SVG output.
//!
//! Data files never contain timestamps; wall-clock information only appears
//! in the `metadata` object of summary JSON files.

mod args;
mod figures;
pub mod svg;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use args::{run, Cli, Command};
pub use figures::{cmd_figures, FIGURE_FILES};

use crate::ensemble::{run_chain, RecurrenceChain, Truncation};
use crate::error::Error;
use crate::models::{ExcitedStateSplit, GroundStateSplit, Model, ModelKind, Side, WaveModel};
use crate::numerics::ode::OdeSpec;
use crate::numerics::quadrature::QuadratureSpec;
use crate::stats::{build_histogram, compare_to_model, merge, outcome_fractions, to_pdf, Histogram};
use crate::trajectories::{trajectory_fan, FanEntry, DEFAULT_SAMPLE_COUNT};
use crate::verify::{self, ResidualReport, VelocityOffset};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;

/// Initial positions used by `trajectories` when none are given.
pub const DEFAULT_FAN: [f64; 10] = [-2.0, -1.5, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 1.5, 2.0];

/// Velocity offset applied by `debug_corrupt_velocity`.
pub const CORRUPTION: f64 = 0.01;

/// Thresholds applied by `verify`.
pub const CONTINUITY_THRESHOLD_GROUND: f64 = 1e-6;
pub const CONTINUITY_THRESHOLD_EXCITED: f64 = 1e-5;
pub const SCHRODINGER_THRESHOLD: f64 = 1e-5;
pub const CROSSCHECK_THRESHOLD: f64 = 1e-8;

/// Everything a command needs. Serialised as a single flat JSON object;
/// every field is optional in the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelKind,
    pub x0: f64,
    /// Recurrence horizon; the model default (20 ground, 10 excited) when
    /// absent.
    pub horizon: Option<f64>,
    pub recurrences: usize,
    pub bin_width: f64,
    pub ode_abs_tol: f64,
    pub ode_rel_tol: f64,
    pub ode_initial_step: f64,
    pub ode_max_step: f64,
    pub quad_abs_tol: f64,
    pub quad_rel_tol: f64,
    pub quad_max_subdivisions: usize,
    pub out: PathBuf,
    pub emit_svg: bool,
    /// Run one chain per entry instead of the single chain from `x0`.
    pub parallel_chains: Option<Vec<f64>>,
    /// Initial positions for `trajectories`.
    pub trajectory_x0: Option<Vec<f64>>,
    /// Adds 0.01 to the velocity seen by `verify`.
    pub debug_corrupt_velocity: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let ode = OdeSpec::default();
        let quad = QuadratureSpec::default();
        RunConfig {
            model: ModelKind::Ground,
            x0: 1.0,
            horizon: None,
            recurrences: 100_000,
            bin_width: 0.1,
            ode_abs_tol: ode.abs_tol,
            ode_rel_tol: ode.rel_tol,
            ode_initial_step: ode.initial_step,
            ode_max_step: ode.max_step,
            quad_abs_tol: quad.abs_tol,
            quad_rel_tol: quad.rel_tol,
            quad_max_subdivisions: quad.max_subdivisions,
            out: PathBuf::from("out"),
            emit_svg: false,
            parallel_chains: None,
            trajectory_x0: None,
            debug_corrupt_velocity: false,
        }
    }
}

/// Failure of a command before or while producing its artifacts.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Simulation(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_USAGE
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config file {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.recurrences < 1 {
            return bad("recurrences must be at least 1".into());
        }
        if !(self.bin_width > 0.0) || !self.bin_width.is_finite() {
            return bad(format!("bin_width must be positive (got {})", self.bin_width));
        }
        if !self.x0.is_finite() {
            return bad(format!("x0 must be finite (got {})", self.x0));
        }
        if let Some(h) = self.horizon {
            if !(h > 0.0) || !h.is_finite() {
                return bad(format!("horizon must be positive (got {h})"));
            }
        }
        self.ode().map_err(|e| CliError::Config(e.to_string()))?;
        self.quadrature().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }

    pub fn ode(&self) -> crate::Result<OdeSpec> {
        OdeSpec::new(self.ode_abs_tol, self.ode_rel_tol, self.ode_initial_step, self.ode_max_step)
    }

    pub fn quadrature(&self) -> crate::Result<QuadratureSpec> {
        QuadratureSpec::new(self.quad_abs_tol, self.quad_rel_tol, self.quad_max_subdivisions)
    }

    pub fn build_model(&self) -> CliResult<Model> {
        Ok(Model::new(self.model, self.quadrature()?))
    }

    pub fn horizon(&self) -> f64 {
        self.horizon.unwrap_or(match self.model {
            ModelKind::Ground => 20.0,
            ModelKind::Excited => ExcitedStateSplit::DEFAULT_SPLIT_TIME,
        })
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub artifacts: Vec<PathBuf>,
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serialisable");
    text.push('\n');
    write_file(path, &text)
}

/// Shortest decimal that parses back to the same f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Writes a header and rows through the csv crate (comma separated, LF).
pub(crate) fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let csv_err = |e: csv::Error| CliError::Config(format!("{}: {e}", path.display()));
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

// ---------------------------------------------------------------- verify

/// One check of the `verify` report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub threshold: f64,
    pub passed: bool,
    pub report: ResidualReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub model: ModelKind,
    pub corrupted_velocity: bool,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

fn check(report: ResidualReport, threshold: f64) -> CheckResult {
    CheckResult {
        threshold,
        passed: report.below(threshold),
        report,
    }
}

/// Runs the residual suites for the configured model.
pub fn verify_model(cfg: &RunConfig) -> CliResult<VerifyReport> {
    let quad = cfg.quadrature()?;
    let offset = if cfg.debug_corrupt_velocity { CORRUPTION } else { 0.0 };
    let mut checks = Vec::new();
    match cfg.model {
        ModelKind::Ground => {
            let model = GroundStateSplit::with_quadrature(quad);
            let corrupted = VelocityOffset { inner: model, offset };
            let grid = verify::continuity_grid(ModelKind::Ground);
            checks.push(check(
                verify::continuity_residual(&corrupted, grid, verify::CONTINUITY_STEP)?,
                CONTINUITY_THRESHOLD_GROUND,
            ));
            checks.push(check(
                verify::schrodinger_residual_gs(
                    &model,
                    verify::schrodinger_grid(),
                    verify::SCHRODINGER_STEP_X,
                    verify::SCHRODINGER_STEP_T,
                )?,
                SCHRODINGER_THRESHOLD,
            ));
            checks.push(check(
                verify::velocity_crosscheck_gs(&model, verify::crosscheck_grid())?,
                CROSSCHECK_THRESHOLD,
            ));
        }
        ModelKind::Excited => {
            let model = ExcitedStateSplit::with_quadrature(quad);
            let corrupted = VelocityOffset { inner: model, offset };
            checks.push(check(
                verify::continuity_residual(&corrupted, verify::continuity_grid(ModelKind::Excited), verify::CONTINUITY_STEP)?,
                CONTINUITY_THRESHOLD_EXCITED,
            ));
        }
    }
    Ok(VerifyReport {
        model: cfg.model,
        corrupted_velocity: cfg.debug_corrupt_velocity,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

/// Writes `verify_<model>.json`; exit 0 when every check passes, 2 otherwise.
pub fn cmd_verify(cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    let report = verify_model(cfg)?;
    ensure_dir(&cfg.out)?;
    let path = cfg.out.join(format!("verify_{}.json", cfg.model));
    write_json(&path, &report)?;
    for c in &report.checks {
        log::info!(
            "{}: max {:e} (threshold {:e}) {}",
            c.report.name,
            c.report.max_abs_residual,
            c.threshold,
            if c.passed { "ok" } else { "FAILED" }
        );
    }
    Ok(Outcome {
        exit_code: if report.passed { EXIT_OK } else { EXIT_VERIFICATION },
        artifacts: vec![path],
    })
}

// -------------------------------------------------------------- ensemble

/// Metrics of an ensemble against the model's reference density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMetrics {
    pub n: u64,
    pub l1: f64,
    pub sup: f64,
    pub ks: f64,
    pub chi2: f64,
    pub chi2_bins: usize,
    pub p_left: f64,
    pub p_right: f64,
}

/// Metrics from positions and outcomes alone, so the same numbers can be
/// recomputed from a CSV file.
pub fn summarize(model: &dyn WaveModel, positions: &[f64], outcomes: &[Side], bin_width: f64) -> crate::Result<EnsembleMetrics> {
    let h = build_histogram(positions, bin_width)?;
    metrics_from_histogram(model, &h, outcomes)
}

fn metrics_from_histogram(model: &dyn WaveModel, h: &Histogram, outcomes: &[Side]) -> crate::Result<EnsembleMetrics> {
    let cmp = compare_to_model(h, model)?;
    let (p_left, p_right) = outcome_fractions(outcomes)?;
    Ok(EnsembleMetrics {
        n: cmp.n,
        l1: cmp.l1,
        sup: cmp.sup,
        ks: cmp.ks,
        chi2: cmp.chi2,
        chi2_bins: cmp.chi2_bins,
        p_left,
        p_right,
    })
}

/// Run-time information kept out of the data files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub runtime_seconds: f64,
    pub finished_unix_seconds: u64,
    pub version: String,
}

fn metadata(started: Instant) -> Metadata {
    Metadata {
        runtime_seconds: started.elapsed().as_secs_f64(),
        finished_unix_seconds: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

/// One chain's entry in the ensemble summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSummary {
    pub x0: f64,
    pub csv: String,
    pub requested: usize,
    pub completed: usize,
    pub truncation: Option<Truncation>,
    pub metrics: Option<EnsembleMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub model: ModelKind,
    pub horizon: f64,
    pub bin_width: f64,
    pub ode: OdeSpec,
    pub quadrature: QuadratureSpec,
    pub chains: Vec<ChainSummary>,
    /// Metrics of all chains together (equal to the single chain's metrics
    /// when only one was run), as top-level fields. Absent when no chain
    /// produced a single position.
    #[serde(flatten)]
    pub metrics: Option<EnsembleMetrics>,
    pub metadata: Metadata,
}

/// Writes `n,relative_position,outcome` rows.
pub fn write_chain_csv(path: &Path, chain: &RecurrenceChain) -> CliResult<()> {
    write_csv(
        path,
        &["n", "relative_position", "outcome"],
        chain.records.iter().map(|r| {
            vec![
                r.index.to_string(),
                fmt_f64(r.relative_position),
                r.outcome.to_string(),
            ]
        }),
    )
}

/// Reads back a file written by [`write_chain_csv`].
pub fn read_chain_csv(path: &Path) -> CliResult<(Vec<f64>, Vec<Side>)> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut positions = Vec::new();
    let mut outcomes = Vec::new();
    for row in r.records() {
        let row = row.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let x: f64 = row
            .get(1)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CliError::Config(format!("{}: bad position in {row:?}", path.display())))?;
        let side: Side = row.get(2).unwrap_or("").parse()?;
        positions.push(x);
        outcomes.push(side);
    }
    Ok((positions, outcomes))
}

fn histogram_svg(model: &dyn WaveModel, h: &Histogram, title: &str) -> String {
    let pdf = to_pdf(h);
    let w = h.bin_width;
    let (lo, hi) = svg::extent(pdf.iter().map(|p| p.0));
    let (lo, hi) = (lo.min(-3.5) - w, hi.max(3.5) + w);
    let reference: Vec<(f64, f64)> = (0..=400)
        .map(|i| lo + (hi - lo) * i as f64 / 400.0)
        .map(|x| (x, model.reference_density(x)))
        .collect();
    let top = svg::extent(pdf.iter().map(|p| p.1).chain(reference.iter().map(|p| p.1))).1 * 1.1;
    let mut plot = svg::Plot::new(title, "relative position", "probability density", (lo, hi), (0.0, top));
    for &(c, d) in &pdf {
        plot.rect(c - 0.5 * w, c + 0.5 * w, 0.0, d, "#9ecae1", Some("#3182bd"));
    }
    plot.polyline(&reference, "#d62728", 2.0);
    plot.legend(0, "histogram", "#9ecae1");
    plot.legend(1, "|psi(x,0)|^2", "#d62728");
    plot.render()
}

/// Runs the configured chain (or `parallel_chains`), writes the CSVs, the
/// summary JSON and, with `emit_svg`, a histogram SVG. A truncated chain
/// keeps its partial CSV, records the cause and yields exit code 1.
pub fn cmd_ensemble(cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    let started = Instant::now();
    let model = cfg.build_model()?;
    let ode = cfg.ode()?;
    let horizon = cfg.horizon();
    ensure_dir(&cfg.out)?;

    let starts: Vec<f64> = cfg.parallel_chains.clone().unwrap_or_else(|| vec![cfg.x0]);
    if starts.is_empty() {
        return Err(CliError::Config("parallel_chains must not be empty".into()));
    }
    let chains: Vec<RecurrenceChain> = starts
        .par_iter()
        .map(|&x0| run_chain(&model, x0, horizon, cfg.recurrences, &ode))
        .collect::<crate::Result<_>>()?;

    let mut artifacts = Vec::new();
    let mut summaries = Vec::new();
    let mut merged: Option<Histogram> = None;
    let mut all_outcomes = Vec::new();
    for (i, chain) in chains.iter().enumerate() {
        let name = if starts.len() == 1 {
            format!("ensemble_{}.csv", cfg.model)
        } else {
            format!("ensemble_{}_chain{i}.csv", cfg.model)
        };
        let path = cfg.out.join(&name);
        write_chain_csv(&path, chain)?;
        artifacts.push(path);
        let positions = chain.positions();
        let outcomes = crate::ensemble::outcome_sequence(chain);
        let metrics = if positions.is_empty() {
            None
        } else {
            let h = build_histogram(&positions, cfg.bin_width)?;
            let m = metrics_from_histogram(&model, &h, &outcomes)?;
            merged = Some(match merged {
                None => h,
                Some(acc) => merge(&acc, &h)?,
            });
            Some(m)
        };
        all_outcomes.extend(outcomes);
        summaries.push(ChainSummary {
            x0: chain.x0,
            csv: name,
            requested: chain.requested,
            completed: chain.records.len(),
            truncation: chain.truncation.clone(),
            metrics,
        });
    }

    let truncated = chains.iter().any(|c| c.truncation.is_some());
    let total = match &merged {
        Some(h) => Some(metrics_from_histogram(&model, h, &all_outcomes)?),
        None => None,
    };
    let summary = EnsembleSummary {
        model: cfg.model,
        horizon,
        bin_width: cfg.bin_width,
        ode,
        quadrature: cfg.quadrature()?,
        chains: summaries,
        metrics: total,
        metadata: metadata(started),
    };
    let summary_path = cfg.out.join(format!("ensemble_{}_summary.json", cfg.model));
    write_json(&summary_path, &summary)?;
    artifacts.push(summary_path);

    if cfg.emit_svg {
        let n = merged.as_ref().map_or(0, |h| h.total);
        if n < 2 {
            log::warn!("only {n} position(s); not enough data for a histogram SVG");
        } else if let Some(hist) = &merged {
            let path = cfg.out.join(format!("ensemble_{}_histogram.svg", cfg.model));
            let title = format!("{} state, n = {}", cfg.model, hist.total);
            write_file(&path, &histogram_svg(&model, hist, &title))?;
            artifacts.push(path);
        }
    }
    Ok(Outcome {
        exit_code: if truncated { EXIT_USAGE } else { EXIT_OK },
        artifacts,
    })
}

// ---------------------------------------------------------- trajectories

fn fan_csv(path: &Path, fan: &[FanEntry]) -> CliResult<()> {
    let times: Vec<f64> = fan
        .iter()
        .find_map(|e| e.result.as_ref().ok())
        .map(|tr| tr.samples.iter().map(|s| s.t).collect())
        .unwrap_or_default();
    let mut header = vec!["t".to_string()];
    header.extend((1..=fan.len()).map(|i| format!("x_{i}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = times.iter().enumerate().map(|(j, &t)| {
        let mut row = vec![fmt_f64(t)];
        row.extend(fan.iter().map(|e| match &e.result {
            Ok(tr) => fmt_f64(tr.samples[j].x),
            Err(_) => String::new(),
        }));
        row
    });
    write_csv(path, &header_refs, rows)
}

fn fan_svg(fan: &[FanEntry], title: &str, t_max: f64) -> String {
    let ok: Vec<_> = fan.iter().filter_map(|e| e.result.as_ref().ok()).collect();
    let (lo, hi) = svg::extent(ok.iter().flat_map(|tr| tr.samples.iter().map(|s| s.x)));
    let (lo, hi) = if lo.is_finite() { (lo - 0.5, hi + 0.5) } else { (-1.0, 1.0) };
    let mut plot = svg::Plot::new(title, "t", "x(t)", (0.0, t_max), (lo, hi));
    for (i, tr) in ok.iter().enumerate() {
        let pts: Vec<(f64, f64)> = tr.samples.iter().map(|s| (s.t, s.x)).collect();
        plot.polyline(&pts, svg::PALETTE[i % svg::PALETTE.len()], 1.5);
    }
    plot.render()
}

/// Integrates one trajectory per x0 over [0, horizon] and writes
/// `trajectories_<model>.csv` (columns t, x_1..x_k); failed entries leave
/// their column empty and are reported on stderr.
pub fn cmd_trajectories(cfg: &RunConfig, x0_list: &[f64]) -> CliResult<Outcome> {
    cfg.validate()?;
    if x0_list.is_empty() {
        return Err(CliError::Config("no initial positions given".into()));
    }
    let model = cfg.build_model()?;
    let horizon = cfg.horizon();
    let fan = trajectory_fan(&model, x0_list, (0.0, horizon), &cfg.ode()?, DEFAULT_SAMPLE_COUNT);
    for (i, e) in fan.iter().enumerate() {
        if let Err(err) = &e.result {
            eprintln!("x_{} (x0 = {}): {err}", i + 1, e.x0);
        }
    }
    ensure_dir(&cfg.out)?;
    let path = cfg.out.join(format!("trajectories_{}.csv", cfg.model));
    fan_csv(&path, &fan)?;
    let mut artifacts = vec![path];
    if cfg.emit_svg {
        let path = cfg.out.join(format!("trajectories_{}.svg", cfg.model));
        write_file(&path, &fan_svg(&fan, &format!("{} state trajectories", cfg.model), horizon))?;
        artifacts.push(path);
    }
    Ok(Outcome {
        exit_code: EXIT_OK,
        artifacts,
    })
}

/// Prints `err` to stderr.
pub fn report_error(err: &CliError) {
    let _ = writeln!(std::io::stderr(), "error: {err}");
}
