//! Paired runs from perturbed data and the weighted difference norms that
//! should respond linearly to the size of the perturbation.

use num_complex::Complex64;
use serde::Serialize;

use crate::diagnostics::estimate_radius;
use crate::error::{LabError, Result};
use crate::mild::{heat_propagate, march, MarchOptions, NoHook, TrajectoryGrid};
use crate::spectral::{
    leray_project, norm_l2, norm_sq_unchecked, ModelConfig, MultiplierSpec, Projection, RandomFieldSpec,
    SpectralField, WavenumberGrid,
};

/// Largest relative spread across δ of each normalized supremum.
pub const LINEAR_VARIATION: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DirectionKind {
    /// Smooth field on the lattice points with `|m| ≤ 2`.
    LowMode,
    /// Field supported on the shell `|k| ∈ [0.45, 0.55]·k_max`.
    HighShell,
}

/// Random perturbation direction with `‖A^{1/2}φ‖ = 1`, Leray-projected
/// when the model is.
pub fn perturbation_direction(grid: &WavenumberGrid, kind: DirectionKind, seed: u64, cfg: &ModelConfig) -> Result<SpectralField> {
    let raw = match kind {
        DirectionKind::LowMode => RandomFieldSpec::new(1.0, seed)
            .band_limited(2.0 * grid.base_wavenumber() * (1.0 + 1e-12))
            .generate(grid),
        DirectionKind::HighShell => {
            let (lo, hi) = (0.45 * grid.k_max(), 0.55 * grid.k_max());
            let g = grid.clone();
            RandomFieldSpec::new(0.0, seed)
                .generate(grid)
                .map_modes(|i, v| if (lo..=hi).contains(&g.k_norm(i)) { v } else { [Complex64::new(0.0, 0.0); 3] })
        }
    };
    let projected = match cfg.projection {
        Projection::Leray => leray_project(&raw),
        Projection::Identity => raw,
    };
    let norm = norm_sq_unchecked(&projected, &MultiplierSpec::FracPower(0.5)).sqrt();
    if !(norm > 0.0) {
        return Err(LabError::InvalidArgument("perturbation direction has no retained modes".into()));
    }
    Ok(projected.scaled(1.0 / norm))
}

#[derive(Debug, Clone)]
pub struct PerturbationSpec {
    pub base: SpectralField,
    pub direction: SpectralField,
    pub deltas: Vec<f64>,
    /// Gevrey weight `λ` of the difference norms.
    pub lambda: f64,
}

impl PerturbationSpec {
    pub fn new(base: SpectralField, direction: SpectralField, deltas: Vec<f64>, lambda: f64) -> Result<Self> {
        if base.grid() != direction.grid() {
            return Err(LabError::GridMismatch);
        }
        if deltas.iter().any(|d| !(d.is_finite() && *d >= 0.0)) || !(lambda.is_finite() && lambda >= 0.0) {
            return Err(LabError::InvalidArgument("deltas and lambda must be finite and nonnegative".into()));
        }
        Ok(Self {
            base,
            direction,
            deltas,
            lambda,
        })
    }

    /// `u₀ + δφ`; `δ = 0` returns an exact copy of `u₀`.
    pub fn perturbed(&self, delta: f64) -> SpectralField {
        if delta == 0.0 {
            return self.base.clone();
        }
        self.base.axpy(delta, &self.direction).expect("grids checked at construction")
    }
}

#[derive(Debug)]
pub struct PairedRuns {
    pub base: TrajectoryGrid,
    /// One entry per δ; failed runs keep their error.
    pub perturbed: Vec<(f64, std::result::Result<TrajectoryGrid, LabError>)>,
}

impl PairedRuns {
    /// True when some perturbed run failed and the report is partial.
    pub fn partial(&self) -> bool {
        self.perturbed.iter().any(|(_, r)| r.is_err())
    }
}

/// March the base data and every perturbed copy with identical settings.
pub fn paired_run(spec: &PerturbationSpec, cfg: &ModelConfig, opts: &MarchOptions) -> Result<PairedRuns> {
    let base = march(&spec.base, opts, cfg, &mut NoHook)?;
    let perturbed = spec
        .deltas
        .iter()
        .map(|&d| (d, march(&spec.perturbed(d), opts, cfg, &mut NoHook)))
        .collect();
    Ok(PairedRuns { base, perturbed })
}

/// `λ` with `λ√τ_end` equal to `fraction` of the radius estimated on the
/// final base state, `τ` being time since the start of the run.
pub fn admissible_lambda(base: &TrajectoryGrid, fraction: f64) -> Result<f64> {
    let last = base.field(base.len() - 1);
    let est = estimate_radius(last);
    if !est.reliable {
        return Err(LabError::InsufficientSamples { needed: 5, got: est.samples });
    }
    let tau = base.end() - base.start();
    Ok(fraction * est.slope / tau.sqrt())
}

/// Weighted difference norms along one pair, at elapsed times `τ = t - t₀`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DifferenceSeries {
    pub delta: f64,
    pub times: Vec<f64>,
    /// `‖A^{1/2}e^{λ√τA}(v-u)‖`.
    pub k1: Vec<f64>,
    /// `τ^{3/8}‖A^{5/4}e^{λ√τA}(v-u)‖`.
    pub k2: Vec<f64>,
    /// `⟨τ⟩^{-1/4}‖e^{λ√τA}(v-u)‖`.
    pub k3: Vec<f64>,
    /// `‖z‖` with `z = v - u - e^{-τA²}(v₀-u₀)`.
    pub z: Vec<f64>,
}

impl DifferenceSeries {
    pub fn sups(&self) -> [f64; 3] {
        let sup = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
        [sup(&self.k1), sup(&self.k2), sup(&self.k3)]
    }
}

pub fn difference_norm_series(u: &TrajectoryGrid, v: &TrajectoryGrid, lambda: f64, delta: f64) -> Result<DifferenceSeries> {
    if u.nodes() != v.nodes() || u.start() != v.start() {
        return Err(LabError::ShapeMismatch {
            expected: u.len(),
            actual: v.len(),
        });
    }
    let t0 = u.start();
    let d0 = v.initial().sub(u.initial())?;
    let w0 = heat_propagate(&d0, t0, u.nodes())?;
    let mut out = DifferenceSeries {
        delta,
        times: vec![0.0],
        k1: Vec::new(),
        k2: vec![0.0],
        k3: Vec::new(),
        z: vec![0.0],
    };
    out.k1.push(norm_sq_unchecked(&d0, &MultiplierSpec::FracPower(0.5)).sqrt());
    out.k3.push(norm_sq_unchecked(&d0, &MultiplierSpec::identity()).sqrt());
    for (m, (fu, fv)) in u.fields().iter().zip(v.fields()).enumerate() {
        let tau = u.nodes()[m] - t0;
        let diff = fv.sub(fu)?;
        let gev = MultiplierSpec::Gevrey(lambda * tau.sqrt());
        let weighted = |r: f64| -> Result<f64> {
            norm_l2(&diff, &MultiplierSpec::Composite(vec![MultiplierSpec::FracPower(r), gev.clone()])).map_err(|e| match e {
                LabError::UnreliableWeight { theta, theta_max } => LabError::UnreliableWeightAtNode {
                    node: m,
                    time: u.nodes()[m],
                    theta,
                    theta_max,
                },
                other => other,
            })
        };
        out.times.push(tau);
        out.k1.push(weighted(0.5)?);
        out.k2.push(tau.powf(0.375) * weighted(1.25)?);
        out.k3.push((1.0 + tau * tau).powf(-0.125) * weighted(0.0)?);
        out.z.push(norm_sq_unchecked(&diff.sub(w0.field(m))?, &MultiplierSpec::identity()).sqrt());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub deltas: Vec<f64>,
    /// `sup/δ` of the three weighted quantities, one row per δ.
    pub normalized: Vec<[f64; 3]>,
    /// Largest `sup‖z‖/δ` per δ.
    pub z_over_delta: Vec<f64>,
    /// `max/min - 1` across δ for each quantity.
    pub variation: [f64; 3],
    /// `K₁, K₂, K₃` as the maximum over δ.
    pub constants: [f64; 3],
    pub linear: bool,
}

/// Compare normalized suprema across at least three δ spanning two decades.
pub fn linear_response_report(series: &[DifferenceSeries]) -> Result<StabilityReport> {
    let used: Vec<&DifferenceSeries> = series.iter().filter(|s| s.delta > 0.0).collect();
    if used.len() < 3 {
        return Err(LabError::InsufficientSamples {
            needed: 3,
            got: used.len(),
        });
    }
    let (dmin, dmax) = used
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), s| (a.min(s.delta), b.max(s.delta)));
    if dmax < 100.0 * dmin * (1.0 - 1e-12) {
        return Err(LabError::InvalidArgument("deltas must span at least two decades".into()));
    }
    let normalized: Vec<[f64; 3]> = used.iter().map(|s| s.sups().map(|v| v / s.delta)).collect();
    let z_over_delta = used
        .iter()
        .map(|s| s.z.iter().copied().fold(0.0, f64::max) / s.delta)
        .collect();
    let mut variation = [0.0; 3];
    let mut constants = [0.0; 3];
    for q in 0..3 {
        let lo = normalized.iter().map(|r| r[q]).fold(f64::INFINITY, f64::min);
        let hi = normalized.iter().map(|r| r[q]).fold(0.0, f64::max);
        variation[q] = if lo > 0.0 { hi / lo - 1.0 } else { f64::INFINITY };
        constants[q] = hi;
    }
    Ok(StabilityReport {
        deltas: used.iter().map(|s| s.delta).collect(),
        normalized,
        z_over_delta,
        variation,
        constants,
        linear: variation.iter().all(|v| *v < LINEAR_VARIATION),
    })
}
