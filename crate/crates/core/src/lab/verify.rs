//! The acceptance checks, one function per criterion. Each returns a
//! pass/fail flag with a one-line account of the measured numbers.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagnostics::{
    check_growth_bound, energy_identity_check, estimate_radius, estimate_radius_oracle, fit_decay_slope,
    monitor_differential_inequality, norm_series_fields, norm_series_oracle, BoundId, BoundParams, EnergyMonitor,
    OracleProvider, Quantity, Verdict,
};
use crate::error::{LabError, Result};
use crate::mild::{contraction_report, march, picard_solve, weighted_norm, MarchOptions, NoHook, PicardOptions, WeightedNormSpec};
use crate::oracle::{burgers_residual, exact_radius, oracle_shells, sample_on_torus, ExampleParams, OracleNormOptions, TorusRoute};
use crate::spectral::{
    apply_bounded, build_grid, l2, leray_project, norm_sq_unchecked, physical_l2, ModelConfig, MultiplierSpec,
    RandomFieldSpec, SpectralField, WavenumberGrid,
};
use crate::stability::{
    admissible_lambda, difference_norm_series, linear_response_report, paired_run, perturbation_direction,
    DirectionKind, PerturbationSpec,
};

use super::run::taylor_green;

pub const RESIDUAL_TOL: f64 = 1e-8;
pub const RADIUS_SERIES_TOL: f64 = 0.02;
pub const RADIUS_TORUS_TOL: f64 = 0.05;
pub const NORM_SLOPE_TOL: f64 = 0.05;
pub const J_SLOPE_TOL: f64 = 0.1;
pub const LIMINF_FACTOR: f64 = 0.95;
pub const ORACLE_ERROR_TOL: f64 = 1e-3;
pub const ENERGY_TOL: f64 = 1e-5;
pub const HEAT_ENERGY_TOL: f64 = 1e-10;
pub const PICARD_RATIO_SLACK: f64 = 1.1;
pub const PICARD_AGREEMENT_TOL: f64 = 1e-6;
pub const DIFFINEQ_K_CHANGE: f64 = 0.02;
pub const SHELL_FLAT_TOL: f64 = 0.1;
pub const SHELL_DECAY: f64 = 1e-6;
pub const PROJECTION_TOL: f64 = 1e-13;
pub const PLANCHEREL_TOL: f64 = 1e-12;
pub const SEMIGROUP_TOL: f64 = 1e-14;
pub const PRODUCT_STABILITY: f64 = 0.1;
pub const SCALE_INVARIANCE_TOL: f64 = 1e-12;

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "oracle residual"),
    (2, "exact radius"),
    (3, "decay rates"),
    (4, "growth bound and sharpness"),
    (5, "liminf constant"),
    (6, "solver vs oracle"),
    (7, "energy identity"),
    (8, "Picard contraction"),
    (9, "differential inequality"),
    (10, "Besov shell signature"),
    (11, "stability linear response"),
    (12, "property suites"),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} [{:>2}] {}: {}", self.id, self.name, self.detail)
    }
}

/// Run one criterion; an internal error counts as a failure.
pub fn run_criterion(id: u8) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .unwrap_or("unknown");
    let outcome = match id {
        1 => oracle_residual(),
        2 => radius_reproduction(),
        3 => decay_rates(),
        4 => growth_and_sharpness(),
        5 => liminf_constant(),
        6 => solver_vs_oracle(),
        7 => energy_identity(),
        8 => picard_contraction(),
        9 => differential_inequality(),
        10 => shell_signature(),
        11 => stability_response(),
        12 => property_suites(),
        _ => Err(LabError::InvalidArgument(format!("no criterion {id}"))),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult { id, name, passed, detail }
}

type Outcome = Result<(bool, String)>;

fn log_times(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| if i + 1 == count { hi } else { lo * (hi / lo).powf(i as f64 / (count - 1) as f64) })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn oracle_residual() -> Outcome {
    let p = ExampleParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let t = rng.gen_range(0.5..=5.0);
        let x: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-6.0..6.0));
        let res = burgers_residual(t, x, &p)?;
        worst = res.iter().fold(worst, |m, r| m.max(r.abs()));
    }
    Ok((worst <= RESIDUAL_TOL, format!("max |residual| = {worst:.3e} over 100 points")))
}

pub fn radius_reproduction() -> Outcome {
    let p = ExampleParams::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for t in [1.0, 3.0, 10.0] {
        let est = estimate_radius_oracle(t, &p)?;
        let e = rel(est.slope, exact_radius(t, &p)?);
        ok &= est.reliable && e <= RADIUS_SERIES_TOL;
        parts.push(format!("t={t}: {e:.1e}"));
    }
    let grid = build_grid(64, 20.0, 2.0 / 3.0)?;
    let f = sample_on_torus(1.0, &grid, &p, TorusRoute::default())?;
    let est = estimate_radius(&f);
    let e = rel(est.slope, exact_radius(1.0, &p)?);
    ok &= est.reliable && e <= RADIUS_TORUS_TOL;
    parts.push(format!("torus n=64: {e:.2e}"));
    Ok((ok, format!("relative errors {}", parts.join(", "))))
}

pub fn decay_rates() -> Outcome {
    let p = ExampleParams::default();
    let r_list = [0.0, 0.5, 1.25];
    let times = log_times(10.0, 200.0, 40);
    let series = norm_series_oracle(&times, &r_list, &[0.0], &p, &OracleNormOptions::default(), false)?;
    let (t, norm) = series.present(Quantity::L2);
    let (slope, _) = fit_decay_slope(&t, &norm, (10.0, 200.0))?;
    let mut ok = (slope + 1.25).abs() <= NORM_SLOPE_TOL;
    let mut parts = vec![format!("|u| slope {slope:.4}")];
    for (i, r) in r_list.iter().enumerate() {
        let (t, j) = series.present(Quantity::J(i));
        let (s, _) = fit_decay_slope(&t, &j, (10.0, 200.0))?;
        ok &= (s + 2.5 + r).abs() <= J_SLOPE_TOL;
        parts.push(format!("J_{r} slope {s:.4}"));
    }
    Ok((ok, parts.join(", ")))
}

pub fn growth_and_sharpness() -> Outcome {
    let provider = OracleProvider::default();
    let times = log_times(20.0, 200.0, 40);
    let params = BoundParams {
        sigma: 2.5,
        epsilon: 0.5,
        epsilon_tilde: 0.25,
        ..Default::default()
    };
    let bounded = check_growth_bound(&provider, BoundId::GrowthL2, params, &times)?;
    let sharp = check_growth_bound(
        &provider,
        BoundId::GrowthL2,
        BoundParams {
            epsilon_tilde: 0.5,
            ..params
        },
        &times,
    )?;
    let first = sharp.ratios.first().copied().unwrap_or(f64::NAN);
    let last = sharp.ratios.last().copied().unwrap_or(f64::NAN);
    let ok = bounded.verdict == Verdict::Bounded && sharp.verdict == Verdict::Unbounded;
    Ok((
        ok,
        format!(
            "eps~=1/4: {:?} (C = {:.4}); eps~=1/2: {:?} (ratio {first:.4} -> {last:.4}, x{:.3})",
            bounded.verdict,
            bounded.fitted_constant,
            sharp.verdict,
            last / first
        ),
    ))
}

pub fn liminf_constant() -> Outcome {
    let report = check_growth_bound(
        &OracleProvider::default(),
        BoundId::RadiusLiminf,
        BoundParams::default(),
        &log_times(10.0, 200.0, 40),
    )?;
    let inf = report
        .times
        .iter()
        .zip(&report.ratios)
        .filter(|(t, _)| **t >= 100.0)
        .map(|(_, r)| *r)
        .fold(f64::INFINITY, f64::min);
    let target = 6f64.sqrt() * LIMINF_FACTOR;
    Ok((
        inf >= target && report.skipped == 0,
        format!("inf over [100, 200] = {inf:.4}, threshold {target:.4}"),
    ))
}

pub fn solver_vs_oracle() -> Outcome {
    let p = ExampleParams::default();
    let grid = build_grid(64, 20.0, 2.0 / 3.0)?;
    let u0 = sample_on_torus(1.0, &grid, &p, TorusRoute::default())?;
    let traj = march(&u0, &MarchOptions::new(1.0, 2.0, 1e-3), &ModelConfig::burgers(), &mut NoHook)?;
    let exact = sample_on_torus(2.0, &grid, &p, TorusRoute::default())?;
    let err = l2(&traj.field(traj.len() - 1).sub(&exact)?) / l2(&exact);
    Ok((err <= ORACLE_ERROR_TOL, format!("relative L2 error at t=2: {err:.3e}")))
}

fn energy_drift(cfg: &ModelConfig, n: usize) -> Result<f64> {
    let grid = build_grid(n, 2.0 * std::f64::consts::PI, 2.0 / 3.0)?;
    let u0 = taylor_green(&grid, 1.0)?;
    let mut mon = EnergyMonitor::new();
    march(&u0, &MarchOptions::new(0.0, 1.0, 1e-3).observing_every_step(), cfg, &mut mon)?;
    Ok(energy_identity_check(&mon.log, ENERGY_TOL).fitted_constant)
}

pub fn energy_identity() -> Outcome {
    let ns = energy_drift(&ModelConfig::navier_stokes(), 64)?;
    let heat = energy_drift(&ModelConfig::heat_only(), 64)?;
    Ok((
        ns <= ENERGY_TOL && heat <= HEAT_ENERGY_TOL,
        format!("Taylor-Green drift {ns:.3e}, heat-only drift {heat:.3e}"),
    ))
}

/// Small band-limited solenoidal data on `16³` with `‖u₀‖ = amplitude`.
fn picard_data(amplitude: f64) -> Result<SpectralField> {
    let grid = build_grid(16, 2.0 * std::f64::consts::PI, 2.0 / 3.0)?;
    let f = leray_project(&RandomFieldSpec::new(1.0, 3).band_limited(3.0).generate(&grid));
    Ok(f.scaled(amplitude / l2(&f)))
}

pub fn picard_contraction() -> Outcome {
    let cfg = ModelConfig::navier_stokes();
    let spec = WeightedNormSpec::for_data_regularity(0.5);
    let opts = PicardOptions::default();
    let u0 = picard_data(0.05)?;
    let out = picard_solve(&u0, 1.0, &spec, &cfg, &opts)?;
    let kappa = out.report.kappa;
    let worst_ratio = out.report.observed_ratios.iter().copied().fold(0.0, f64::max);
    let marched = march(
        &u0,
        &MarchOptions::new(0.0, 1.0, 1e-3).with_outputs(out.solution.nodes().to_vec()),
        &cfg,
        &mut NoHook,
    )?;
    let gap = weighted_norm(&marched.sub(&out.solution)?, &spec)?.value;
    let size = weighted_norm(&out.solution, &spec)?.value;
    let control = contraction_report(&picard_data(100.0)?, 1.0, &spec, &cfg, &opts)?;
    let ok = out.report.contractive
        && out.converged
        && worst_ratio <= PICARD_RATIO_SLACK * kappa
        && gap <= PICARD_AGREEMENT_TOL
        && !control.contractive;
    Ok((
        ok,
        format!(
            "kappa {kappa:.3e}, max ratio {worst_ratio:.3e}, |X - march| = {gap:.2e} (|X| = {size:.3e}); large data kappa {:.2} flagged {}",
            control.kappa,
            if control.contractive { "contractive" } else { "non-contractive" }
        ),
    ))
}

fn diffineq_constant(per_decade: usize) -> Result<(Verdict, f64)> {
    let (lo, hi): (f64, f64) = (1e-2, 200.0);
    let count = ((hi / lo).log10() * per_decade as f64).ceil() as usize + 1;
    let series = norm_series_oracle(
        &log_times(lo, hi, count),
        &[0.0, 0.5],
        &[0.0, 0.5],
        &ExampleParams::default(),
        &OracleNormOptions::default(),
        false,
    )?;
    let r = monitor_differential_inequality(&series, BoundId::IntegralHalf, 4.0, 0.5)?;
    Ok((r.verdict, r.fitted_constant))
}

pub fn differential_inequality() -> Outcome {
    let (v1, k1) = diffineq_constant(23)?;
    let (v2, k2) = diffineq_constant(46)?;
    let change = rel(k2, k1);
    Ok((
        v1 == Verdict::Bounded && v2 == Verdict::Bounded && change < DIFFINEQ_K_CHANGE,
        format!("K = {k1:.4} ({v1:?}), doubled sampling K = {k2:.4} ({v2:?}), change {change:.2e}"),
    ))
}

pub fn shell_signature() -> Outcome {
    let p = ExampleParams::default();
    let initial = oracle_shells(0.0, 4..=8, &p)?;
    let worst_flat = initial
        .windows(2)
        .map(|w| (w[1].1 / w[0].1 - 1.0).abs())
        .fold(0.0, f64::max);
    let later = oracle_shells(1.0, -4..=16, &p)?;
    let (peak_at, peak) = later
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, s)| if s.1 > acc.1 { (i, s.1) } else { acc });
    let eighth = later.get(peak_at + 8).map(|s| s.1 / peak);
    let ok = worst_flat <= SHELL_FLAT_TOL && eighth.is_some_and(|v| v < SHELL_DECAY);
    Ok((
        ok,
        format!(
            "u0 consecutive ratios within {worst_flat:.3e} of 1; u(1) peak at q={}, 8 shells later {:.3e} of peak",
            later[peak_at].0,
            eighth.unwrap_or(f64::NAN)
        ),
    ))
}

pub fn stability_response() -> Outcome {
    let p = ExampleParams::default();
    let grid = build_grid(32, 20.0, 2.0 / 3.0)?;
    let cfg = ModelConfig::burgers();
    let u0 = sample_on_torus(1.0, &grid, &p, TorusRoute::default())?;
    let phi = perturbation_direction(&grid, DirectionKind::LowMode, 7, &cfg)?;
    let spec = PerturbationSpec::new(u0, phi, vec![0.0, 1e-2, 1e-3, 1e-4], 0.0)?;
    let runs = paired_run(&spec, &cfg, &MarchOptions::new(1.0, 2.0, 2e-3).with_cadence(0.05))?;
    let lambda = admissible_lambda(&runs.base, 0.5)?;
    let mut series = Vec::new();
    let mut identical = false;
    for (delta, run) in runs.perturbed {
        let v = run?;
        if delta == 0.0 {
            identical = v.fields() == runs.base.fields();
        }
        series.push(difference_norm_series(&runs.base, &v, lambda, delta)?);
    }
    let report = linear_response_report(&series)?;
    let v = report.variation;
    Ok((
        report.linear && identical,
        format!(
            "lambda {lambda:.3}, variation across delta {:.2e} {:.2e} {:.2e}, delta=0 identical: {identical}",
            v[0], v[1], v[2]
        ),
    ))
}

fn gradient_field(grid: &WavenumberGrid, seed: u64) -> SpectralField {
    let phi = RandomFieldSpec::new(1.0, seed).generate(grid);
    let g = grid.clone();
    phi.map_modes(|i, v| {
        let k = g.wavevector(i);
        let s = v[0];
        std::array::from_fn(|c| Complex64::new(0.0, k[c]) * s)
    })
}

/// `P` is idempotent and kills gradients.
pub fn projection_properties(grid: &WavenumberGrid, seed: u64) -> (f64, f64) {
    let u = RandomFieldSpec::new(0.5, seed).with_mean().generate(grid);
    let pu = leray_project(&u);
    let idem = l2(&leray_project(&pu).sub(&pu).expect("same grid")) / l2(&pu);
    let grad = gradient_field(grid, seed ^ 0x5eed);
    let kill = l2(&leray_project(&grad)) / l2(&grad);
    (idem, kill)
}

/// `‖u‖` from the coefficients and from the samples.
pub fn plancherel_gap(grid: &WavenumberGrid, seed: u64) -> f64 {
    let u = RandomFieldSpec::new(1.0, seed).with_mean().generate(grid);
    rel(physical_l2(&u), l2(&u))
}

/// Largest relative defect of `m_a m_b = m_{a+b}` for the heat, Gevrey and
/// fractional-power families.
pub fn semigroup_defect(grid: &WavenumberGrid, seed: u64) -> f64 {
    let u = RandomFieldSpec::new(1.0, seed).generate(grid);
    let pairs = [
        (MultiplierSpec::Heat(0.03), MultiplierSpec::Heat(0.05), MultiplierSpec::Heat(0.08)),
        (MultiplierSpec::Gevrey(0.1), MultiplierSpec::Gevrey(0.15), MultiplierSpec::Gevrey(0.25)),
        (MultiplierSpec::FracPower(0.75), MultiplierSpec::FracPower(0.5), MultiplierSpec::FracPower(1.25)),
        (MultiplierSpec::FracPower(1.5), MultiplierSpec::FracPower(-0.5), MultiplierSpec::FracPower(1.0)),
    ];
    pairs
        .iter()
        .map(|(a, b, ab)| {
            let two = apply_bounded(&apply_bounded(&u, a), b);
            let one = apply_bounded(&u, ab);
            l2(&two.sub(&one).expect("same grid")) / l2(&one)
        })
        .fold(0.0, f64::max)
}

fn scalar_field(grid: &WavenumberGrid, seed: u64, band: f64) -> SpectralField {
    RandomFieldSpec::new(1.0, seed)
        .band_limited(band)
        .generate(grid)
        .map_modes(|_, v| [v[0], Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)])
}

/// `‖fg‖ / (‖A^r f‖‖A^{3/2-r} g‖)` for scalar band-limited `f, g`. The
/// grid must resolve the product exactly (`n > 4·band/k₀`).
pub fn product_ratio(grid: &WavenumberGrid, r: f64, seed: u64, band: f64) -> f64 {
    let f = scalar_field(grid, seed, band);
    let g = scalar_field(grid, seed.wrapping_add(1 << 32), band);
    let (pf, pg) = (f.to_physical(), g.to_physical());
    let sq: f64 = pf[0].iter().zip(&pg[0]).map(|(a, b)| (a * b) * (a * b)).sum();
    let prod = (sq * grid.volume() / grid.len() as f64).sqrt();
    let nf = norm_sq_unchecked(&f, &MultiplierSpec::FracPower(r)).sqrt();
    let ng = norm_sq_unchecked(&g, &MultiplierSpec::FracPower(1.5 - r)).sqrt();
    prod / (nf * ng)
}

/// Sampled product constants over `count` and `2·count` pairs.
pub fn product_constant(grid: &WavenumberGrid, r: f64, count: usize, band: f64) -> (f64, f64) {
    let ratios: Vec<f64> = (0..2 * count as u64).map(|i| product_ratio(grid, r, 1000 + i, band)).collect();
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    (max(&ratios[..count]), max(&ratios))
}

/// `sup_{y ≥ 0} y^α e^{λy - y²}` at its critical point, over `⟨λ⟩^α e^{λ²/4}`.
pub fn multiplier_profile(alpha: f64, lambda: f64) -> f64 {
    let y = (lambda + (lambda * lambda + 8.0 * alpha).sqrt()) / 4.0;
    let log_sup = if alpha == 0.0 { 0.0 } else { alpha * y.ln() } + lambda * y - y * y;
    let log_bound = alpha * 0.5 * (1.0 + lambda * lambda).ln() + lambda * lambda / 4.0;
    (log_sup - log_bound).exp()
}

/// `C_α = sup_{λ ∈ [0, 10]}` of [`multiplier_profile`]: a scan followed by a
/// golden-section polish around the best sample.
pub fn multiplier_constant(alpha: f64) -> f64 {
    let h = 1e-3;
    let best = (0..=10_000)
        .map(|i| i as f64 * h)
        .max_by(|a, b| multiplier_profile(alpha, *a).total_cmp(&multiplier_profile(alpha, *b)))
        .unwrap_or(0.0);
    let (mut a, mut b) = ((best - h).max(0.0), (best + h).min(10.0));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let (c, d) = (b - phi * (b - a), a + phi * (b - a));
        if multiplier_profile(alpha, c) >= multiplier_profile(alpha, d) {
            b = d;
        } else {
            a = c;
        }
    }
    multiplier_profile(alpha, 0.5 * (a + b)).max(multiplier_profile(alpha, best))
}

/// `C_α` and the worst ratio of the scalar inequality over a `(y, λ)` grid
/// on `[0, 50] × [0, 10]`.
pub fn multiplier_inequality(alpha: f64) -> (f64, f64) {
    let c = multiplier_constant(alpha);
    let mut worst: f64 = 0.0;
    for i in 0..=500 {
        let lambda = i as f64 * 0.02;
        let bound = c * (1.0 + lambda * lambda).powf(alpha / 2.0) * (lambda * lambda / 4.0).exp();
        for j in 0..=5000 {
            let y: f64 = j as f64 * 0.01;
            let lhs = if alpha == 0.0 { 1.0 } else { y.powf(alpha) } * (lambda * y - y * y).exp();
            worst = worst.max(lhs / bound);
        }
    }
    (c, worst)
}

pub fn property_suites() -> Outcome {
    let grid = build_grid(16, 2.0 * std::f64::consts::PI, 2.0 / 3.0)?;
    let mut ok = true;
    let mut parts = Vec::new();

    let (idem, kill) = (0..4).map(|s| projection_properties(&grid, s)).fold((0.0f64, 0.0f64), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    ok &= idem <= PROJECTION_TOL && kill <= PROJECTION_TOL;
    parts.push(format!("Leray {idem:.1e}/{kill:.1e}"));

    let planch = (0..4).map(|s| plancherel_gap(&grid, s)).fold(0.0, f64::max);
    ok &= planch <= PLANCHEREL_TOL;
    parts.push(format!("Plancherel {planch:.1e}"));

    let semi = (0..4).map(|s| semigroup_defect(&grid, s)).fold(0.0, f64::max);
    ok &= semi <= SEMIGROUP_TOL;
    parts.push(format!("semigroup {semi:.1e}"));

    for r in [0.6, 0.75, 1.0] {
        let (c200, c400) = product_constant(&grid, r, 200, 3.0);
        let change = rel(c400, c200);
        ok &= c400.is_finite() && change <= PRODUCT_STABILITY;
        parts.push(format!("product r={r}: C {c200:.4}->{c400:.4}"));
    }

    for alpha in [0.0, 0.75, 1.25] {
        let (c, worst) = multiplier_inequality(alpha);
        ok &= worst <= 1.0 + 1e-12;
        parts.push(format!("C_{alpha} = {c:.4} (worst {worst:.6})"));
    }

    let fields: Vec<SpectralField> = (0..3).map(|s| RandomFieldSpec::new(1.5, s).generate(&grid)).collect();
    let torus = norm_series_fields(&fields, &[0.0, 0.5, 1.25], &[0.0], false)?;
    let oracle = norm_series_oracle(&[0.0, 1.0, 5.0], &[0.0, 0.5, 1.25], &[0.0], &ExampleParams::default(), &OracleNormOptions::default(), false)?;
    let g_is_j = [torus, oracle]
        .iter()
        .all(|s| (0..3).all(|i| s.column(Quantity::J(i)) == s.column(Quantity::G(i, 0))));
    ok &= g_is_j;
    parts.push(format!("G(0)=J {g_is_j}"));

    let base = sample_on_torus(1.0, &build_grid(32, 20.0, 2.0 / 3.0)?, &ExampleParams::default(), TorusRoute::default())?;
    let r0 = estimate_radius(&base).slope;
    let scale = [1e-3, 7.0, 1e4]
        .iter()
        .map(|c| rel(estimate_radius(&base.scaled(*c)).slope, r0))
        .fold(0.0, f64::max);
    ok &= scale <= SCALE_INVARIANCE_TOL;
    parts.push(format!("radius scale {scale:.1e}"));

    Ok((ok, parts.join("; ")))
}
