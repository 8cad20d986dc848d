//! Energy balance `‖u(t)‖² + 2∫₀ᵗ‖Au‖² = ‖u₀‖²` along a run.

use serde::Serialize;

use super::bounds::{BoundCheckReport, BoundId, BoundParams, Verdict};
use crate::mild::DiagnosticsHook;
use crate::spectral::{nonlinear_term, norm_sq_unchecked, ModelConfig, MultiplierSpec, SpectralField};

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EnergyLog {
    pub times: Vec<f64>,
    /// `‖u‖²`.
    pub energy: Vec<f64>,
    /// `‖Au‖²`.
    pub dissipation: Vec<f64>,
    /// `2⟨u, P(Mu·∇)u⟩`, logged only when requested.
    pub defect: Vec<f64>,
}

/// Hook recording the energy balance terms.
pub struct EnergyMonitor {
    cfg: Option<ModelConfig>,
    pub log: EnergyLog,
}

impl EnergyMonitor {
    pub fn new() -> Self {
        Self { cfg: None, log: EnergyLog::default() }
    }

    /// Also log the transport defect, which vanishes for solenoidal `Mu`.
    pub fn with_defect(cfg: ModelConfig) -> Self {
        Self {
            cfg: Some(cfg),
            log: EnergyLog::default(),
        }
    }
}

impl Default for EnergyMonitor {
    fn default() -> Self {
        Self::new()
    }
}

impl DiagnosticsHook for EnergyMonitor {
    fn observe(&mut self, time: f64, field: &SpectralField) {
        self.log.times.push(time);
        self.log.energy.push(norm_sq_unchecked(field, &MultiplierSpec::identity()));
        self.log.dissipation.push(norm_sq_unchecked(field, &MultiplierSpec::FracPower(1.0)));
        if let Some(cfg) = &self.cfg {
            let v = nonlinear_term(field, field, cfg).map(|n| 2.0 * field.inner(&n).unwrap_or(f64::NAN));
            self.log.defect.push(v.unwrap_or(f64::NAN));
        }
    }
}

fn is_uniform(times: &[f64]) -> bool {
    if times.len() < 3 {
        return true;
    }
    let h = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    times.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h)
}

/// Running integrals `∫_{t₀}^{t_m} f` for every `m`. Uniform samples get
/// Gregory end corrections through third differences; otherwise trapezoid.
pub fn cumulative_integral(times: &[f64], f: &[f64]) -> Vec<f64> {
    let n = times.len();
    let mut trap = vec![0.0; n];
    for i in 1..n {
        trap[i] = trap[i - 1] + 0.5 * (times[i] - times[i - 1]) * (f[i] + f[i - 1]);
    }
    if n < 3 || !is_uniform(times) {
        return trap;
    }
    let h = (times[n - 1] - times[0]) / (n - 1) as f64;
    let fwd = |k: usize| -> f64 {
        match k {
            1 => f[1] - f[0],
            2 => f[2] - 2.0 * f[1] + f[0],
            _ => f[3] - 3.0 * f[2] + 3.0 * f[1] - f[0],
        }
    };
    let bwd = |m: usize, k: usize| -> f64 {
        match k {
            1 => f[m] - f[m - 1],
            2 => f[m] - 2.0 * f[m - 1] + f[m - 2],
            _ => f[m] - 3.0 * f[m - 1] + 3.0 * f[m - 2] - f[m - 3],
        }
    };
    (0..n)
        .map(|m| match m {
            0 => 0.0,
            // cubic interpolation through the first four samples
            1 if n >= 4 => h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]),
            1 => trap[1],
            2 => h / 3.0 * (f[0] + 4.0 * f[1] + f[2]),
            _ => {
                trap[m]
                    - h / 12.0 * (bwd(m, 1) - fwd(1))
                    - h / 24.0 * (bwd(m, 2) + fwd(2))
                    - 19.0 * h / 720.0 * (bwd(m, 3) - fwd(3))
            }
        })
        .collect()
}

/// Relative drift of the energy balance at every logged time. Bounded iff
/// the largest drift is at most `tolerance`.
pub fn energy_identity_check(log: &EnergyLog, tolerance: f64) -> BoundCheckReport {
    let e0 = log.energy.first().copied().unwrap_or(0.0);
    let dissipated = cumulative_integral(&log.times, &log.dissipation);
    let drift: Vec<f64> = log
        .energy
        .iter()
        .zip(&dissipated)
        .map(|(e, d)| if e0 > 0.0 { (e + 2.0 * d - e0).abs() / e0 } else { (e + 2.0 * d).abs() })
        .collect();
    let max_drift = drift.iter().copied().fold(0.0, f64::max);
    BoundCheckReport {
        bound_id: BoundId::EnergyIdentity,
        params: BoundParams::default(),
        time_range: (
            log.times.first().copied().unwrap_or(f64::NAN),
            log.times.last().copied().unwrap_or(f64::NAN),
        ),
        times: log.times.clone(),
        ratios: drift,
        verdict: if max_drift <= tolerance { Verdict::Bounded } else { Verdict::Inconclusive },
        fitted_constant: max_drift,
        skipped: 0,
        auxiliary: log.defect.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gregory_is_exact_for_cubics() {
        let t: Vec<f64> = (0..12).map(|i| 0.5 + 0.25 * i as f64).collect();
        let f: Vec<f64> = t.iter().map(|x| x * x * x - 2.0 * x).collect();
        let c = cumulative_integral(&t, &f);
        let prim = |x: f64| x.powi(4) / 4.0 - x * x;
        for m in 1..t.len() {
            assert!((c[m] - (prim(t[m]) - prim(t[0]))).abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn gregory_converges_at_fourth_order() {
        let err = |n: usize| {
            let t: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
            let f: Vec<f64> = t.iter().map(|x| (3.0 * x).exp()).collect();
            let c = cumulative_integral(&t, &f);
            (c[n] - ((3.0f64).exp() - 1.0) / 3.0).abs()
        };
        let ratio = err(40) / err(80);
        assert!(ratio > 14.0, "{ratio}");
    }

    #[test]
    fn pure_decay_has_no_drift() {
        // ‖u‖² = e^{-2t}, ‖Au‖² = e^{-2t}
        let t: Vec<f64> = (0..=1000).map(|i| i as f64 * 1e-3).collect();
        let e: Vec<f64> = t.iter().map(|t| (-2.0 * t).exp()).collect();
        let log = EnergyLog {
            times: t,
            energy: e.clone(),
            dissipation: e,
            defect: Vec::new(),
        };
        let r = energy_identity_check(&log, 1e-10);
        assert_eq!(r.verdict, Verdict::Bounded, "{}", r.fitted_constant);
    }
}
