//! The `figures` command: CSV + SVG pairs for amplitude and potential
//! surfaces, trajectory fans, the first recurrences and the histograms of
//! both models.

use std::path::{Path, PathBuf};

use super::{ensure_dir, fmt_f64, histogram_svg, svg, write_csv, write_file, CliResult, Outcome, RunConfig, EXIT_OK};
use crate::ensemble::{outcome_sequence, run_chain, RecurrenceChain};
use crate::models::{ExcitedStateSplit, GroundStateSplit, Model, ModelKind, Side, WaveModel};
use crate::stats::{build_histogram, to_pdf};
use crate::trajectories::{trajectory_fan, FanEntry, DEFAULT_SAMPLE_COUNT};

/// Base names of the artifacts; each is written as `<name>.csv` and
/// `<name>.svg`.
pub const FIGURE_FILES: [&str; 8] = [
    "fig1_ground_amplitude",
    "fig2_ground_potential",
    "fig3_ground_trajectories",
    "fig4_ground_recurrences",
    "fig5_ground_histogram",
    "fig6_excited_amplitude",
    "fig7_excited_trajectories",
    "fig8_excited_histogram",
];

/// Initial positions of the excited-state fan.
pub const EXCITED_FAN: [f64; 12] = [-2.5, -2.0, -1.5, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5];

/// Number of leading recurrences shown in the scatter figure.
pub const SCATTER_COUNT: usize = 100;

/// k / denom for k in lo..=hi, so grid values are the nearest doubles to
/// the intended decimals.
fn axis(lo: i32, hi: i32, denom: f64) -> Vec<f64> {
    (lo..=hi).map(|k| k as f64 / denom).collect()
}

struct Surface {
    xs: Vec<f64>,
    ts: Vec<f64>,
    /// values[j][i] at (xs[i], ts[j])
    values: Vec<Vec<f64>>,
}

impl Surface {
    fn build(xs: Vec<f64>, ts: Vec<f64>, f: impl Fn(f64, f64) -> crate::Result<f64>) -> crate::Result<Self> {
        let values = ts
            .iter()
            .map(|&t| xs.iter().map(|&x| f(x, t)).collect::<crate::Result<Vec<_>>>())
            .collect::<crate::Result<Vec<_>>>()?;
        Ok(Surface { xs, ts, values })
    }

    fn write(&self, base: &Path, value_name: &str, title: &str) -> CliResult<Vec<PathBuf>> {
        let csv = base.with_extension("csv");
        let rows = self.ts.iter().enumerate().flat_map(|(j, &t)| {
            self.xs
                .iter()
                .enumerate()
                .map(move |(i, &x)| vec![fmt_f64(t), fmt_f64(x), fmt_f64(self.values[j][i])])
        });
        write_csv(&csv, &["t", "x", value_name], rows)?;

        let dx = self.xs[1] - self.xs[0];
        let dt = self.ts[1] - self.ts[0];
        let range = svg::extent(self.values.iter().flatten().copied());
        let cells: Vec<(f64, f64, f64)> = self
            .ts
            .iter()
            .enumerate()
            .flat_map(|(j, &t)| self.xs.iter().enumerate().map(move |(i, &x)| (x, t, self.values[j][i])))
            .collect();
        let x_span = (self.xs[0] - 0.5 * dx, self.xs[self.xs.len() - 1] + 0.5 * dx);
        let t_span = (self.ts[0] - 0.5 * dt, self.ts[self.ts.len() - 1] + 0.5 * dt);
        let mut plot = svg::Plot::new(
            &format!("{title} (range {} to {})", short(range.0), short(range.1)),
            "x",
            "t",
            x_span,
            t_span,
        );
        plot.heatmap(&cells, dx, dt, range);
        let svg_path = base.with_extension("svg");
        write_file(&svg_path, &plot.render())?;
        Ok(vec![csv, svg_path])
    }
}

fn short(v: f64) -> String {
    format!("{v:.3}")
}

fn write_fan(base: &Path, fan: &[FanEntry], title: &str, horizon: f64) -> CliResult<Vec<PathBuf>> {
    let csv = base.with_extension("csv");
    super::fan_csv(&csv, fan)?;
    let svg_path = base.with_extension("svg");
    write_file(&svg_path, &super::fan_svg(fan, title, horizon))?;
    Ok(vec![csv, svg_path])
}

fn write_scatter(base: &Path, chain: &RecurrenceChain) -> CliResult<Vec<PathBuf>> {
    let records = &chain.records[..chain.records.len().min(SCATTER_COUNT)];
    let csv = base.with_extension("csv");
    super::write_csv(
        &csv,
        &["n", "relative_position", "outcome"],
        records
            .iter()
            .map(|r| vec![r.index.to_string(), fmt_f64(r.relative_position), r.outcome.to_string()]),
    )?;
    let (lo, hi) = svg::extent(records.iter().map(|r| r.relative_position));
    let bound = lo.abs().max(hi.abs()).max(1.0) * 1.1;
    let mut plot = svg::Plot::new(
        &format!("first {} recurrences", records.len()),
        "recurrence n",
        "relative position",
        (0.0, records.len().max(2) as f64 - 1.0),
        (-bound, bound),
    );
    plot.polyline(&[(0.0, 0.0), (records.len().max(2) as f64 - 1.0, 0.0)], "#999", 1.0);
    for r in records {
        let color = match r.outcome {
            Side::Left => svg::PALETTE[0],
            Side::Right => svg::PALETTE[1],
        };
        plot.marker(r.index as f64, r.relative_position, color);
    }
    plot.legend(0, "LEFT", svg::PALETTE[0]);
    plot.legend(1, "RIGHT", svg::PALETTE[1]);
    let svg_path = base.with_extension("svg");
    write_file(&svg_path, &plot.render())?;
    Ok(vec![csv, svg_path])
}

fn write_histogram(base: &Path, model: &dyn WaveModel, chain: &RecurrenceChain, bin_width: f64) -> CliResult<Vec<PathBuf>> {
    let positions = chain.positions();
    let h = build_histogram(&positions, bin_width)?;
    let csv = base.with_extension("csv");
    let rows = to_pdf(&h).into_iter().map(|(c, d)| {
        let (a, b) = (c - 0.5 * bin_width, c + 0.5 * bin_width);
        let reference = (model.reference_cdf(b) - model.reference_cdf(a)) / bin_width;
        vec![fmt_f64(c), fmt_f64(d), fmt_f64(reference)]
    });
    write_csv(&csv, &["bin_center", "density", "reference_bin_average"], rows)?;
    let outcomes = outcome_sequence(chain);
    let left = outcomes.iter().filter(|&&s| s == Side::Left).count();
    let title = format!(
        "{} state, n = {}, LEFT fraction {:.4}",
        model.kind(),
        h.total,
        left as f64 / outcomes.len().max(1) as f64
    );
    let svg_path = base.with_extension("svg");
    write_file(&svg_path, &histogram_svg(model, &h, &title))?;
    Ok(vec![csv, svg_path])
}

fn horizon_for(cfg: &RunConfig, kind: ModelKind) -> f64 {
    if cfg.model == kind {
        cfg.horizon()
    } else {
        RunConfig {
            model: kind,
            horizon: None,
            ..cfg.clone()
        }
        .horizon()
    }
}

/// Writes every pair in [`FIGURE_FILES`] into `cfg.out`. The ground and
/// excited chains use `cfg.x0` and `cfg.recurrences` (at least 100 for the
/// ground chain, which also feeds the scatter figure).
pub fn cmd_figures(cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    ensure_dir(&cfg.out)?;
    let quad = cfg.quadrature()?;
    let ode = cfg.ode()?;
    let ground = GroundStateSplit::with_quadrature(quad);
    let excited = ExcitedStateSplit::with_quadrature(quad);
    let base = |i: usize| cfg.out.join(FIGURE_FILES[i]);
    let mut artifacts = Vec::new();

    let amp = Surface::build(axis(-80, 80, 10.0), axis(0, 60, 10.0), |x, t| Ok(ground.amplitude(x, t)))?;
    artifacts.extend(amp.write(&base(0), "R", "ground-state amplitude R(x,t)")?);

    let pot = Surface::build(axis(-60, 60, 10.0), axis(0, 60, 10.0), |x, t| ground.potential(x, t))?;
    artifacts.extend(pot.write(&base(1), "V", "external potential V(x,t)")?);

    let t_ground = horizon_for(cfg, ModelKind::Ground);
    let fan = trajectory_fan(&ground, &super::DEFAULT_FAN, (0.0, t_ground), &ode, DEFAULT_SAMPLE_COUNT);
    artifacts.extend(write_fan(&base(2), &fan, "ground state trajectories", t_ground)?);

    let ground_model = Model::Ground(ground);
    let chain = run_chain(&ground_model, cfg.x0, t_ground, cfg.recurrences.max(SCATTER_COUNT), &ode)?;
    artifacts.extend(write_scatter(&base(3), &chain)?);
    let mut hist_chain = chain;
    hist_chain.records.truncate(cfg.recurrences);
    artifacts.extend(write_histogram(&base(4), &ground_model, &hist_chain, cfg.bin_width)?);

    let ex_amp = Surface::build(axis(-70, 70, 5.0), axis(0, 100, 10.0), |x, t| Ok(excited.amplitude(x, t)))?;
    artifacts.extend(ex_amp.write(&base(5), "abs_psi", "first excited state |psi(x,t)|")?);

    let t_excited = horizon_for(cfg, ModelKind::Excited);
    let fan = trajectory_fan(&excited, &EXCITED_FAN, (0.0, t_excited), &ode, DEFAULT_SAMPLE_COUNT);
    artifacts.extend(write_fan(&base(6), &fan, "excited state trajectories", t_excited)?);

    let excited_model = Model::Excited(excited);
    let chain = run_chain(&excited_model, cfg.x0, t_excited, cfg.recurrences, &ode)?;
    artifacts.extend(write_histogram(&base(7), &excited_model, &chain, cfg.bin_width)?);

    Ok(Outcome {
        exit_code: EXIT_OK,
        artifacts,
    })
}
