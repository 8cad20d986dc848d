//! Sobolev, Gevrey and dyadic-shell norms of the example from its radial
//! spectrum: `‖A^r e^{aA}u‖² = 4π ∫₀^∞ ρ^{2r+4} H² e^{2aρ} dρ`.

use super::physical::ExampleParams;
use super::spectrum::{initial_tail_constant, series_log_h};
use crate::error::{LabError, Result};
use crate::quad::{gauss_kronrod, integrate_log_integrand};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;
const REL_TOL: f64 = 1e-11;
/// Where the `t = 0` integrals switch to the analytic `ρ^{-3}` tail.
const INITIAL_SPLIT: f64 = 60.0;

/// `√(6 s ln s)`, `s = t + t_shift + 1`.
pub fn exact_radius(t: f64, params: &ExampleParams) -> Result<f64> {
    let s = params.s(t)?;
    Ok((6.0 * s * s.ln()).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleNormOptions {
    /// Largest `ρ` at which `H` is treated as trustworthy for weighted norms.
    pub rho_cap: f64,
    /// Required gap, as a fraction of the radius, between `λ√t` and the radius.
    pub margin_fraction: f64,
}

impl Default for OracleNormOptions {
    fn default() -> Self {
        Self {
            rho_cap: 2000.0,
            margin_fraction: 0.02,
        }
    }
}

impl OracleNormOptions {
    fn margin(&self, radius: f64) -> f64 {
        (self.margin_fraction * radius).max(5.0 / self.rho_cap)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleNorms {
    pub t: f64,
    pub r: f64,
    pub lambda: f64,
    /// `J_r(t) = ‖A^r u(t)‖²`.
    pub j: f64,
    /// `G_r(t; λ) = ‖A^r e^{λ√t A}u(t)‖²`.
    pub g: f64,
    /// `(q, 2^{q/2}‖u‖_{shell q})`.
    pub shells: Vec<(i32, f64)>,
}

/// `∫_a^b e^{log_f}` on a finite interval, scaled by the sampled maximum.
fn integrate_finite<F: Fn(f64) -> f64>(log_f: F, a: f64, b: f64) -> f64 {
    let mut peak = f64::NEG_INFINITY;
    for i in 0..=64 {
        let x = a + (b - a) * i as f64 / 64.0;
        peak = peak.max(log_f(x));
    }
    if !peak.is_finite() {
        return 0.0;
    }
    let q = gauss_kronrod(
        |x| {
            let v = log_f(x) - peak;
            if v < -745.0 { 0.0 } else { v.exp() }
        },
        a,
        b,
        REL_TOL,
        0.0,
    );
    q.value * peak.exp()
}

fn weighted_log_integrand(s: f64, r: f64, a: f64) -> impl Fn(f64) -> f64 {
    move |rho: f64| {
        if rho <= 0.0 {
            return f64::NEG_INFINITY;
        }
        FOUR_PI.ln() + (2.0 * r + 4.0) * rho.ln() + 2.0 * series_log_h(s, rho).log_h + 2.0 * a * rho
    }
}

/// `‖A^r e^{aA}u(t)‖²` for a fixed Gevrey exponent `a ≥ 0`, without margin checks.
pub fn gevrey_norm_sq(t: f64, r: f64, a: f64, params: &ExampleParams) -> Result<f64> {
    let s = params.s(t)?;
    let log_f = weighted_log_integrand(s, r, a);
    if s == 1.0 {
        if a > 0.0 || r >= 0.5 {
            return Ok(f64::INFINITY);
        }
        // ρ^{2r+4}H² ≈ C²ρ^{2r-2} beyond the split
        let c = initial_tail_constant();
        let head = integrate_finite(&log_f, 0.0, 1.0)
            + (0..6)
                .map(|i| {
                    let lo = INITIAL_SPLIT.powf(i as f64 / 6.0);
                    let hi = INITIAL_SPLIT.powf((i + 1) as f64 / 6.0);
                    integrate_finite(&log_f, lo, hi)
                })
                .sum::<f64>();
        let tail = FOUR_PI * c * c * INITIAL_SPLIT.powf(2.0 * r - 1.0) / (1.0 - 2.0 * r);
        return Ok(head + tail);
    }
    let (m, scale) = integrate_log_integrand(log_f, 1.0 / s.sqrt(), REL_TOL);
    Ok(m * scale.exp())
}

/// Dyadic shell values `2^{q/2}(4π∫_{2^q}^{2^{q+1}} ρ⁴H² dρ)^{1/2}`.
pub fn oracle_shells(t: f64, q_range: std::ops::RangeInclusive<i32>, params: &ExampleParams) -> Result<Vec<(i32, f64)>> {
    let s = params.s(t)?;
    let log_f = weighted_log_integrand(s, 0.0, 0.0);
    Ok(q_range
        .map(|q| {
            let lo = 2f64.powi(q);
            let mass = integrate_finite(&log_f, lo, 2.0 * lo);
            (q, 2f64.powf(0.5 * q as f64) * mass.sqrt())
        })
        .collect())
}

/// `G_r(λ)` at clock time `t`, refusing weights too close to the radius.
pub fn gevrey_norm_checked(t: f64, r: f64, lambda: f64, params: &ExampleParams, opts: &OracleNormOptions) -> Result<f64> {
    if !(r >= 0.0 && lambda >= 0.0) {
        return Err(LabError::InvalidArgument("r and lambda must be nonnegative".into()));
    }
    let a = lambda * t.max(0.0).sqrt();
    if a > 0.0 {
        let rad = exact_radius(t, params)?;
        let margin = opts.margin(rad);
        if rad - a < margin {
            return Err(LabError::UnreliableWeight {
                theta: lambda,
                theta_max: ((rad - margin) / t.sqrt()).max(0.0),
            });
        }
    }
    gevrey_norm_sq(t, r, a, params)
}

/// `J_r`, `G_r(λ)` and shells `q ∈ [-4, 10]` at clock time `t`.
pub fn oracle_norms(
    t: f64,
    r: f64,
    lambda: f64,
    params: &ExampleParams,
    opts: &OracleNormOptions,
) -> Result<OracleNorms> {
    let g = gevrey_norm_checked(t, r, lambda, params, opts)?;
    let j = if lambda == 0.0 || t == 0.0 { g } else { gevrey_norm_sq(t, r, 0.0, params)? };
    Ok(OracleNorms {
        t,
        r,
        lambda,
        j,
        g,
        shells: oracle_shells(t, -4..=10, params)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_at_one() {
        let r = exact_radius(1.0, &ExampleParams::default()).unwrap();
        assert!((r - (12.0 * 2f64.ln()).sqrt()).abs() < 1e-14);
        assert_eq!(exact_radius(0.0, &ExampleParams::default()).unwrap(), 0.0);
    }

    #[test]
    fn zero_lambda_gives_g_equal_j() {
        let n = oracle_norms(2.0, 0.5, 0.0, &ExampleParams::default(), &OracleNormOptions::default()).unwrap();
        assert_eq!(n.g, n.j);
    }

    #[test]
    fn margin_violation_reports_lambda_max() {
        let p = ExampleParams::default();
        let rad = exact_radius(4.0, &p).unwrap();
        let err = oracle_norms(4.0, 0.0, rad / 2.0, &p, &OracleNormOptions::default()).unwrap_err();
        match err {
            LabError::UnreliableWeight { theta_max, .. } => {
                assert!((theta_max - 0.98 * rad / 2.0).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
