//! Picard iteration `X₀ = Y`, `X_n = Y + B(X_{n-1}, X_{n-1})` on a stored
//! trajectory, with empirical contraction constants.

use statrs::function::gamma::gamma;

use super::duhamel::duhamel_all;
use super::trajectory::{graded_nodes, heat_propagate, TrajectoryGrid};
use super::weighted::{weighted_norm, WeightedNormSpec};
use crate::error::{LabError, Result};
use crate::quad::beta_by_quadrature;
use crate::spectral::{leray_project, ModelConfig, Projection, RandomFieldSpec, SpectralField};

#[derive(Debug, Clone, PartialEq)]
pub struct PicardOptions {
    /// Number of trajectory nodes.
    pub nodes: usize,
    /// Grading exponent `p` in `t_m = T(m/M)^p`.
    pub grading: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Random trajectory pairs used to sample the bilinear constant.
    pub gamma_samples: usize,
    pub seed: u64,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            nodes: 64,
            grading: 2.0,
            tol: 1e-10,
            max_iter: 60,
            gamma_samples: 6,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionReport {
    /// `|Y|` in the weighted norm.
    pub y_norm: f64,
    /// Sampled supremum of `|B(u,v)|/(|u||v|)`.
    pub gamma_est: f64,
    pub r: f64,
    /// `4·γ·R`.
    pub kappa: f64,
    /// `∫₀¹ (1-s)^{-5/8} s^{-3/4} ds` by quadrature.
    pub beta_integral: f64,
    /// `Γ(1/4)Γ(3/8)/Γ(5/8)`, the same integral in closed form.
    pub beta_closed_form: f64,
    /// `sup_{t≤T} t^{s₁}∫₀ᵗ (t-s)^{s₂/2-5/4} s^{-2s₁} ds`.
    pub kernel_factor: f64,
    pub observed_ratios: Vec<f64>,
    pub contractive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardState {
    pub iteration: usize,
    /// `|X_n|`.
    pub norm: f64,
    /// `|X_n - X_{n-1}|`.
    pub difference: f64,
}

#[derive(Debug, Clone)]
pub struct PicardOutcome {
    pub solution: TrajectoryGrid,
    pub history: Vec<PicardState>,
    pub report: ContractionReport,
    pub converged: bool,
}

/// The Beta integral `∫₀¹ (1-s)^{-5/8} s^{-3/4} ds` two ways.
pub fn beta_integral() -> (f64, f64) {
    let quad = beta_by_quadrature(3.0 / 8.0, 1.0 / 4.0).value;
    let closed = gamma(0.25) * gamma(0.375) / gamma(0.625);
    (quad, closed)
}

/// `sup_{0<t≤T} t^{s₁}∫₀ᵗ (t-s)^{s₂/2-5/4} s^{-2s₁} ds
///  = T^{s₂/2-1/4-s₁} B(s₂/2-1/4, 1-2s₁)` when the exponent is nonnegative.
pub fn kernel_factor(horizon: f64, s1: f64, s2: f64) -> f64 {
    let a = s2 / 2.0 - 0.25;
    let b = 1.0 - 2.0 * s1;
    if a <= 0.0 || b <= 0.0 {
        return f64::INFINITY;
    }
    let exponent = a - s1;
    if exponent < 0.0 {
        return f64::INFINITY;
    }
    horizon.powf(exponent) * beta_by_quadrature(a, b).value
}

fn from_nodes(template: &TrajectoryGrid, fields: Vec<SpectralField>) -> Result<TrajectoryGrid> {
    let zero = SpectralField::zeros(template.grid()).with_time(template.start());
    TrajectoryGrid::new(template.start(), zero, template.nodes().to_vec(), fields)
}

fn bilinear_ratio(
    u: &TrajectoryGrid,
    v: &TrajectoryGrid,
    cfg: &ModelConfig,
    spec: &WeightedNormSpec,
) -> Result<Option<f64>> {
    let nu = weighted_norm(u, spec)?.value;
    let nv = weighted_norm(v, spec)?.value;
    if nu == 0.0 || nv == 0.0 {
        return Ok(None);
    }
    let b = from_nodes(u, duhamel_all(u, v, cfg)?)?;
    Ok(Some(weighted_norm(&b, spec)?.value / (nu * nv)))
}

/// `|Y|`, a sampled bilinear constant, and `κ = 4γ|Y|`.
pub fn contraction_report(
    u0: &SpectralField,
    horizon: f64,
    spec: &WeightedNormSpec,
    cfg: &ModelConfig,
    opts: &PicardOptions,
) -> Result<ContractionReport> {
    let nodes = graded_nodes(0.0, horizon, opts.nodes, opts.grading);
    let y = heat_propagate(u0, 0.0, &nodes)?;
    let y_norm = weighted_norm(&y, spec)?.value;
    let mut gamma_est: f64 = 0.0;
    if y_norm > 0.0 {
        let by = from_nodes(&y, duhamel_all(&y, &y, cfg)?)?;
        for (a, b) in [(&y, &y), (&y, &by), (&by, &y)] {
            if let Some(r) = bilinear_ratio(a, b, cfg, spec)? {
                gamma_est = gamma_est.max(r);
            }
        }
    }
    let band = u0.grid().base_wavenumber() * 3.0;
    for s in 0..opts.gamma_samples {
        let mk = |seed: u64| {
            let mut f = RandomFieldSpec::new(1.0, seed).band_limited(band).generate(u0.grid());
            if cfg.projection == Projection::Leray {
                f = leray_project(&f);
            }
            heat_propagate(&f, 0.0, &nodes)
        };
        let a = mk(opts.seed.wrapping_mul(1000).wrapping_add(2 * s as u64))?;
        let b = mk(opts.seed.wrapping_mul(1000).wrapping_add(2 * s as u64 + 1))?;
        if let Some(r) = bilinear_ratio(&a, &b, cfg, spec)? {
            gamma_est = gamma_est.max(r);
        }
    }
    let (beta_q, beta_c) = beta_integral();
    let kappa = 4.0 * gamma_est * y_norm;
    Ok(ContractionReport {
        y_norm,
        gamma_est,
        r: y_norm,
        kappa,
        beta_integral: beta_q,
        beta_closed_form: beta_c,
        kernel_factor: kernel_factor(horizon, spec.s1, spec.s2),
        observed_ratios: Vec::new(),
        contractive: kappa < 1.0,
    })
}

/// Iterate to the fixed point on graded nodes over `(0, T]`. Non-contractive
/// data are iterated anyway; the report flags them.
pub fn picard_solve(
    u0: &SpectralField,
    horizon: f64,
    spec: &WeightedNormSpec,
    cfg: &ModelConfig,
    opts: &PicardOptions,
) -> Result<PicardOutcome> {
    let mut report = contraction_report(u0, horizon, spec, cfg, opts)?;
    let nodes = graded_nodes(0.0, horizon, opts.nodes, opts.grading);
    let y = heat_propagate(u0, 0.0, &nodes)?;
    let mut x = y.clone();
    let mut history = vec![PicardState {
        iteration: 0,
        norm: report.y_norm,
        difference: f64::NAN,
    }];
    let mut first_diff = f64::NAN;
    let mut increases = 0;
    let mut converged = false;
    for n in 1..=opts.max_iter {
        let b = duhamel_all(&x, &x, cfg)?;
        let next_fields = y
            .fields()
            .iter()
            .zip(&b)
            .map(|(yf, bf)| yf.add(bf))
            .collect::<Result<Vec<_>>>()?;
        let next = y.with_fields(next_fields)?;
        let diff = weighted_norm(&next.sub(&x)?, spec)?.value;
        let norm = weighted_norm(&next, spec)?.value;
        let prev_diff = history.last().map(|h| h.difference).unwrap_or(f64::NAN);
        history.push(PicardState {
            iteration: n,
            norm,
            difference: diff,
        });
        x = next;
        if !diff.is_finite() {
            return Err(LabError::Divergence {
                iterations: n,
                last_difference: diff,
                contractive: report.contractive,
                kappa: report.kappa,
            });
        }
        if n == 1 {
            first_diff = diff;
        } else if prev_diff > 0.0 {
            report.observed_ratios.push(diff / prev_diff);
            if diff > prev_diff {
                increases += 1;
                if increases >= 3 {
                    return Err(LabError::Divergence {
                        iterations: n,
                        last_difference: diff,
                        contractive: report.contractive,
                        kappa: report.kappa,
                    });
                }
            } else {
                increases = 0;
            }
        }
        if diff <= opts.tol * first_diff || diff == 0.0 {
            converged = true;
            break;
        }
    }
    Ok(PicardOutcome {
        solution: x,
        history,
        report,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::build_grid;

    #[test]
    fn beta_integral_matches_gamma_identity() {
        let (q, c) = beta_integral();
        assert!((q - c).abs() < 1e-10 * c, "{q} vs {c}");
    }

    #[test]
    fn zero_data_converges_immediately() {
        let g = build_grid(8, 2.0 * std::f64::consts::PI, 2.0 / 3.0).unwrap();
        let z = SpectralField::zeros(&g);
        let opts = PicardOptions {
            nodes: 8,
            gamma_samples: 1,
            ..Default::default()
        };
        let out = picard_solve(&z, 0.5, &WeightedNormSpec::plain(), &ModelConfig::burgers(), &opts).unwrap();
        assert!(out.converged);
        assert_eq!(out.history.len(), 2);
        assert_eq!(out.report.kappa, 0.0);
    }
}
