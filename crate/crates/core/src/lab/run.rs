//! Scenario orchestration: build the data, run one stage, write artifacts.

use std::path::PathBuf;

use serde::Serialize;

use super::config::{Check, InitialData, Scenario};
use super::export::{fmt_num, report_table, save_json, series_table, Table};
use super::snapshot::{read_snapshot, write_snapshot};
use crate::diagnostics::{
    check_growth_bound, energy_identity_check, fit_decay_slope, monitor_differential_inequality, norm_series_fields,
    norm_series_oracle, BoundCheckReport, BoundId, BoundParams, EnergyMonitor, FieldProvider, GrowthProvider,
    OracleProvider, Quantity,
};
use crate::error::{LabError, Result};
use crate::mild::{march, picard_solve, DiagnosticsHook, MarchOptions, NoHook, PicardOptions, WeightedNormSpec};
use crate::oracle::{sample_on_torus, ExampleParams, OracleNormOptions, TorusRoute};
use crate::spectral::{l2, leray_project, ModelConfig, Projection, RandomFieldSpec, SpectralField, WavenumberGrid};
use crate::stability::{
    admissible_lambda, difference_norm_series, linear_response_report, paired_run, perturbation_direction,
    PerturbationSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stage {
    /// Norm series, radius and decay fits of the exact example.
    Oracle,
    /// Time-marched torus run with the requested checks.
    Simulate,
    /// Picard iteration and its contraction report.
    Fixpoint,
    /// Growth-bound and differential-inequality checks.
    Diagnose,
    /// Paired perturbed runs and the linear-response report.
    Stability,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides `output.dir`.
    pub out_dir: Option<PathBuf>,
    /// Overrides the scenario seed.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default)]
pub struct RunSummary {
    pub artifacts: Vec<PathBuf>,
    /// Human-readable result lines.
    pub lines: Vec<String>,
}

struct Sink<'a> {
    scenario: &'a Scenario,
    dir: PathBuf,
    summary: RunSummary,
}

impl Sink<'_> {
    fn path(&self, suffix: &str) -> PathBuf {
        self.dir.join(format!("{}_{suffix}", self.scenario.name))
    }

    fn table(&mut self, suffix: &str, table: &Table) -> Result<()> {
        let p = self.path(&format!("{suffix}.csv"));
        table.save_csv(&p)?;
        self.summary.artifacts.push(p);
        Ok(())
    }

    fn json<D: Serialize>(&mut self, suffix: &str, data: &D) -> Result<()> {
        let p = self.path(&format!("{suffix}.json"));
        save_json(&p, self.scenario, data)?;
        self.summary.artifacts.push(p);
        Ok(())
    }

    /// CSV and/or JSON according to `output.format`.
    fn export<D: Serialize>(&mut self, suffix: &str, table: &Table, data: &D) -> Result<()> {
        if self.scenario.output.format.csv() {
            self.table(suffix, table)?;
        }
        if self.scenario.output.format.json() {
            self.json(suffix, data)?;
        }
        Ok(())
    }

    fn line(&mut self, s: String) {
        self.summary.lines.push(s);
    }
}

pub fn build_grid_for(s: &Scenario) -> Result<WavenumberGrid> {
    WavenumberGrid::new(s.grid.n, s.grid.box_length, s.grid.dealias)
}

/// Taylor–Green vortex `A(sin x cos y cos z, -cos x sin y cos z, 0)` in
/// units where the box is one period.
pub fn taylor_green(grid: &WavenumberGrid, amplitude: f64) -> Result<SpectralField> {
    let n = grid.n();
    let k0 = grid.base_wavenumber();
    let mut c = [vec![0.0; n * n * n], vec![0.0; n * n * n], vec![0.0; n * n * n]];
    let (s, co): (Vec<f64>, Vec<f64>) = (0..n).map(|i| (k0 * grid.coordinate(i)).sin_cos()).unzip();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let idx = grid.index(i, j, k);
                c[0][idx] = amplitude * s[i] * co[j] * co[k];
                c[1][idx] = -amplitude * co[i] * s[j] * co[k];
            }
        }
    }
    SpectralField::from_physical(grid, &c)
}

/// Initial field of a scenario at time `t_start`.
pub fn initial_field(s: &Scenario, seed: u64, cfg: &ModelConfig) -> Result<SpectralField> {
    let grid = build_grid_for(s)?;
    let f = match &s.initial {
        InitialData::TaylorGreen { amplitude } => taylor_green(&grid, *amplitude)?,
        InitialData::ColeHopf { t0 } => sample_on_torus(*t0, &grid, &ExampleParams::default(), TorusRoute::default())?,
        InitialData::SyntheticSpectrum { beta, amplitude, band } => {
            let mut spec = RandomFieldSpec::new(*beta, seed);
            if let Some(b) = band {
                spec = spec.band_limited(*b);
            }
            let mut f = spec.generate(&grid);
            if cfg.projection == Projection::Leray {
                f = leray_project(&f);
            }
            let norm = l2(&f);
            if norm > 0.0 {
                f = f.scaled(amplitude / norm);
            }
            f
        }
        InitialData::SnapshotFile { path } => {
            let (f, _) = read_snapshot(path)?;
            if f.grid() != &grid {
                return Err(LabError::Config(format!(
                    "snapshot '{}' was written on a different grid (n = {}, L = {}, dealias = {})",
                    path.display(),
                    f.grid().n(),
                    f.grid().box_length(),
                    f.grid().dealias()
                )));
            }
            f
        }
    };
    Ok(f.with_time(s.time.t_start))
}

fn march_options(s: &Scenario) -> MarchOptions {
    MarchOptions::new(s.time.t_start, s.time.t_end, s.time.dt).with_cadence(s.time.log_cadence)
}

/// Times `t_start, t_start + c, …, t_end`.
fn cadence_times(s: &Scenario) -> Vec<f64> {
    let mut t = vec![s.time.t_start];
    t.extend(march_options(s).output_times);
    t
}

fn log_times(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

fn verdict_line(r: &BoundCheckReport) -> String {
    format!(
        "{:?}: {:?} over [{}, {}], constant {}, {} skipped",
        r.bound_id,
        r.verdict,
        fmt_num(r.time_range.0),
        fmt_num(r.time_range.1),
        fmt_num(r.fitted_constant),
        r.skipped
    )
}

#[derive(Serialize)]
struct Failure {
    stage: Stage,
    error: String,
    exit_code: i32,
}

/// Run one stage and write its artifacts under the output directory. On a
/// numerical failure a `<name>_failure.json` report is written before the
/// error is returned.
pub fn run_stage(s: &Scenario, stage: Stage, opts: &RunOptions) -> Result<RunSummary> {
    let dir = output_dir(s, opts);
    std::fs::create_dir_all(&dir).map_err(|e| LabError::io(&dir, e))?;
    let mut sink = Sink {
        scenario: s,
        dir,
        summary: RunSummary::default(),
    };
    let seed = opts.seed.unwrap_or(s.seed);
    let outcome = match stage {
        Stage::Oracle => run_oracle(&mut sink),
        Stage::Simulate => run_simulate(&mut sink, seed),
        Stage::Fixpoint => run_fixpoint(&mut sink, seed),
        Stage::Diagnose => run_diagnose(&mut sink, seed),
        Stage::Stability => run_stability(&mut sink, seed),
    };
    match outcome {
        Ok(()) => Ok(sink.summary),
        Err(e) => {
            if e.exit_code() == 3 {
                let report = Failure {
                    stage,
                    error: e.to_string(),
                    exit_code: 3,
                };
                let _ = sink.json("failure", &report);
            }
            Err(e)
        }
    }
}

/// The default pipeline: a torus run with the configured checks.
pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<RunSummary> {
    run_stage(s, Stage::Simulate, opts)
}

fn run_oracle(sink: &mut Sink) -> Result<()> {
    let s = sink.scenario;
    let d = &s.diagnostics;
    let times = cadence_times(s);
    let series = norm_series_oracle(
        &times,
        &d.r_list,
        &d.lambda_list,
        &ExampleParams::default(),
        &OracleNormOptions::default(),
        true,
    )?;
    sink.export("oracle", &series_table(&series), &series)?;

    #[derive(Serialize)]
    struct Decay {
        r: f64,
        slope: Option<f64>,
        stderr: Option<f64>,
    }
    let mut decay = Table::new(vec!["r".into(), "slope".into(), "stderr".into()]);
    let mut rows = Vec::new();
    let window = (times[0].max(f64::MIN_POSITIVE), *times.last().expect("nonempty"));
    for (i, r) in d.r_list.iter().enumerate() {
        let (t, v) = series.present(Quantity::J(i));
        let fit = fit_decay_slope(&t, &v, window).ok();
        decay.push(vec![Some(*r), fit.map(|f| f.0), fit.map(|f| f.1)]);
        if let Some((slope, _)) = fit {
            sink.line(format!("J_{r} decays like t^{}", fmt_num(slope)));
        }
        rows.push(Decay {
            r: *r,
            slope: fit.map(|f| f.0),
            stderr: fit.map(|f| f.1),
        });
    }
    sink.export("decay", &decay, &rows)?;
    sink.line(format!("oracle series: {} times", series.records.len()));
    Ok(())
}

fn run_simulate(sink: &mut Sink, seed: u64) -> Result<()> {
    let s = sink.scenario;
    let cfg = s.model.config()?;
    let u0 = initial_field(s, seed, &cfg)?;
    let checks = &s.diagnostics.checks;
    let energy = checks.contains(&Check::Energy);
    let mut opts = march_options(s);
    let mut monitor = EnergyMonitor::with_defect(cfg.clone());
    let hook: &mut dyn DiagnosticsHook = if energy {
        opts = opts.observing_every_step();
        &mut monitor
    } else {
        &mut NoHook
    };
    let traj = march(&u0, &opts, &cfg, hook)?;
    sink.line(format!("marched {} -> {} ({} outputs)", s.time.t_start, s.time.t_end, traj.len()));

    let mut fields = vec![traj.initial().clone()];
    fields.extend(traj.fields().iter().cloned());

    if s.output.snapshots {
        for (m, f) in fields.iter().enumerate() {
            let p = sink.path(&format!("snapshot_{m:04}.gvry"));
            write_snapshot(&p, f, &cfg)?;
            sink.summary.artifacts.push(p);
        }
    }
    if checks.contains(&Check::Norms) || checks.contains(&Check::Radius) {
        let d = &s.diagnostics;
        let series = norm_series_fields(&fields, &d.r_list, &d.lambda_list, checks.contains(&Check::Radius))?;
        sink.export("series", &series_table(&series), &series)?;
    }
    if energy {
        let report = energy_identity_check(&monitor.log, s.diagnostics.energy_tolerance);
        sink.line(format!(
            "energy identity: max relative drift {} ({:?})",
            fmt_num(report.fitted_constant),
            report.verdict
        ));
        sink.export("energy", &report_table(&report), &report)?;
    }
    if let (true, InitialData::ColeHopf { t0 }) = (checks.contains(&Check::OracleError), &s.initial) {
        let params = ExampleParams::default();
        let mut table = Table::new(vec!["time".into(), "rel_l2_error".into(), "norm_u".into(), "norm_oracle".into()]);
        let mut worst: f64 = 0.0;
        for f in &fields {
            let clock = t0 + (f.time() - s.time.t_start);
            let exact = sample_on_torus(clock, f.grid(), &params, TorusRoute::default())?;
            let ne = l2(&exact);
            let err = l2(&f.sub(&exact)?) / ne;
            worst = worst.max(err);
            table.push(vec![Some(f.time()), Some(err), Some(l2(f)), Some(ne)]);
        }
        sink.line(format!("max relative L2 error vs oracle: {}", fmt_num(worst)));
        sink.table("oracle_error", &table)?;
    }
    Ok(())
}

fn run_fixpoint(sink: &mut Sink, seed: u64) -> Result<()> {
    let s = sink.scenario;
    let cfg = s.model.config()?;
    let u0 = initial_field(s, seed, &cfg)?;
    let horizon = s.time.t_end - s.time.t_start;
    let spec = WeightedNormSpec::for_data_regularity(0.5);
    let opts = PicardOptions {
        seed,
        ..Default::default()
    };
    let out = picard_solve(&u0, horizon, &spec, &cfg, &opts)?;
    let r = &out.report;
    sink.line(format!(
        "kappa = {} ({}), gamma = {}, |Y| = {}",
        fmt_num(r.kappa),
        if r.contractive { "contractive" } else { "not contractive" },
        fmt_num(r.gamma_est),
        fmt_num(r.y_norm)
    ));
    sink.line(format!("converged after {} iterations: {}", out.history.len() - 1, out.converged));
    let mut table = Table::new(vec!["iteration".into(), "norm".into(), "difference".into()]);
    for h in &out.history {
        table.push(vec![
            Some(h.iteration as f64),
            Some(h.norm),
            h.difference.is_finite().then_some(h.difference),
        ]);
    }
    #[derive(Serialize)]
    struct Doc {
        kappa: f64,
        gamma_est: f64,
        y_norm: f64,
        kernel_factor: f64,
        beta_integral: f64,
        beta_closed_form: f64,
        observed_ratios: Vec<f64>,
        contractive: bool,
        converged: bool,
    }
    let doc = Doc {
        kappa: r.kappa,
        gamma_est: r.gamma_est,
        y_norm: r.y_norm,
        kernel_factor: r.kernel_factor,
        beta_integral: r.beta_integral,
        beta_closed_form: r.beta_closed_form,
        observed_ratios: r.observed_ratios.clone(),
        contractive: r.contractive,
        converged: out.converged,
    };
    sink.export("picard", &table, &doc)
}

fn run_diagnose(sink: &mut Sink, seed: u64) -> Result<()> {
    let s = sink.scenario;
    let d = &s.diagnostics;
    let lambda0 = d.lambda_list.iter().copied().find(|l| *l > 0.0).unwrap_or(0.0);
    let large_lo = s.time.t_start.max(1.0 + 1e-9);
    let mut reports = Vec::new();
    let growth_ids = [BoundId::GrowthL2, BoundId::GrowthHalf, BoundId::RadiusLiminf];

    if let InitialData::ColeHopf { .. } = s.initial {
        let provider = OracleProvider::default();
        if s.time.t_end > large_lo {
            let times = log_times(large_lo, s.time.t_end, 40);
            for id in growth_ids {
                reports.push(check_growth_bound(&provider, id, BoundParams::default(), &times)?);
            }
        }
        let t_lo = s.time.t_start.max(s.time.t_end * 1e-4);
        let decades = (s.time.t_end / t_lo).log10();
        let count = ((decades * 60.0).ceil() as usize).max(2);
        let series = norm_series_oracle(
            &log_times(t_lo, s.time.t_end, count),
            &[0.0, 0.5],
            &[0.0, lambda0],
            &ExampleParams::default(),
            &OracleNormOptions::default(),
            false,
        )?;
        for id in [BoundId::IntegralHalf, BoundId::DifferentialHalf] {
            reports.push(monitor_differential_inequality(&series, id, 4.0, lambda0)?);
        }
    } else {
        let cfg = s.model.config()?;
        let u0 = initial_field(s, seed, &cfg)?;
        let traj = march(&u0, &march_options(s), &cfg, &mut NoHook)?;
        let provider = FieldProvider {
            fields: traj.fields(),
        };
        let times: Vec<f64> = traj.nodes().iter().copied().filter(|t| *t > 1.0).collect();
        for id in growth_ids {
            reports.push(check_growth_bound(&provider as &dyn GrowthProvider, id, BoundParams::default(), &times)?);
        }
    }
    for r in &reports {
        sink.line(verdict_line(r));
        let name = format!("{:?}", r.bound_id).to_lowercase();
        sink.export(&name, &report_table(r), r)?;
    }
    Ok(())
}

fn run_stability(sink: &mut Sink, seed: u64) -> Result<()> {
    let s = sink.scenario;
    let st = &s.stability;
    let cfg = s.model.config()?;
    let u0 = initial_field(s, seed, &cfg)?;
    let phi = perturbation_direction(u0.grid(), st.direction, seed, &cfg)?;
    let spec = PerturbationSpec::new(u0, phi, st.deltas.clone(), 0.0)?;
    let runs = paired_run(&spec, &cfg, &march_options(s))?;
    let lambda = admissible_lambda(&runs.base, st.lambda_fraction)?;
    sink.line(format!("lambda = {}", fmt_num(lambda)));
    let mut series = Vec::new();
    for (delta, run) in &runs.perturbed {
        match run {
            Ok(v) => series.push(difference_norm_series(&runs.base, v, lambda, *delta)?),
            Err(e) => sink.line(format!("delta = {delta}: run failed: {e}")),
        }
    }
    for (i, ds) in series.iter().enumerate() {
        let mut t = Table::new(["tau", "k1", "k2", "k3", "z"].map(String::from).to_vec());
        for m in 0..ds.times.len() {
            t.push(vec![Some(ds.times[m]), Some(ds.k1[m]), Some(ds.k2[m]), Some(ds.k3[m]), Some(ds.z[m])]);
        }
        sink.export(&format!("difference_{i}"), &t, ds)?;
    }
    let report = linear_response_report(&series)?;
    let mut t = Table::new(["delta", "k1_over_delta", "k2_over_delta", "k3_over_delta", "z_over_delta"].map(String::from).to_vec());
    for (i, d) in report.deltas.iter().enumerate() {
        let n = report.normalized[i];
        t.push(vec![Some(*d), Some(n[0]), Some(n[1]), Some(n[2]), Some(report.z_over_delta[i])]);
    }
    sink.export("stability", &t, &report)?;
    sink.line(format!(
        "variation across delta: {} {} {} (linear: {}{})",
        fmt_num(report.variation[0]),
        fmt_num(report.variation[1]),
        fmt_num(report.variation[2]),
        report.linear,
        if runs.partial() { ", partial" } else { "" }
    ));
    Ok(())
}

/// Output directory a scenario writes to under `opts`.
pub fn output_dir(s: &Scenario, opts: &RunOptions) -> PathBuf {
    opts.out_dir.clone().unwrap_or_else(|| s.output.dir.clone())
}

