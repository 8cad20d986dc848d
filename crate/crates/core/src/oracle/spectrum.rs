//! Radial Fourier profile of the example,
//! `û_j(t, ξ) = i ξ_j H(t, |ξ|)`, `H(t, ρ) = Σ_{n≥1} c_n e^{-sρ²/n}`,
//! `c_n = 2^{5/2} n^{-5/2} s^{-3(n-1)/2}` (unitary transform, `s = t + 1`).
//!
//! Terms are summed in the log domain around the dominant index, so `H`
//! is available far into its exponentially small tail.

use statrs::function::erf::erf;

use super::physical::ExampleParams;
use crate::error::Result;

const LN_2: f64 = std::f64::consts::LN_2;
/// Terms smaller than `e^{-45}` times the largest are dropped.
const LOG_CUTOFF: f64 = 45.0;
/// At `s = 1` the direct sum runs to `max(MIN_DIRECT, DIRECT_PER_RHO·ρ)`.
const MIN_DIRECT: usize = 2000;
const DIRECT_PER_RHO: f64 = 20.0;

/// `ρ³ H(0, ρ) → 2^{3/2} √π` as `ρ → ∞`.
pub fn initial_tail_constant() -> f64 {
    2f64.powf(1.5) * std::f64::consts::PI.sqrt()
}

#[inline]
fn log_coeff(n: f64, ln_s: f64) -> f64 {
    2.5 * LN_2 - 2.5 * n.ln() - 1.5 * (n - 1.0) * ln_s
}

#[inline]
fn log_term(n: f64, s: f64, ln_s: f64, rho2: f64) -> f64 {
    log_coeff(n, ln_s) - s * rho2 / n
}

/// Running log-sum-exp.
#[derive(Default)]
struct LogSum {
    max: f64,
    sum: f64,
    started: bool,
}

impl LogSum {
    fn add(&mut self, lt: f64) {
        if !self.started {
            self.max = lt;
            self.sum = 1.0;
            self.started = true;
        } else if lt > self.max {
            self.sum = self.sum * (self.max - lt).exp() + 1.0;
            self.max = lt;
        } else {
            self.sum += (lt - self.max).exp();
        }
    }
    fn value(&self) -> f64 {
        if self.started { self.max + self.sum.ln() } else { f64::NEG_INFINITY }
    }
}

/// One evaluation of the series with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub log_h: f64,
    /// Largest index summed directly.
    pub last_index: usize,
    /// Bound on the omitted part relative to the value.
    pub relative_residual: f64,
}

/// Index where `ln c_n - sρ²/n` is maximal (real-valued).
fn dominant_index(s: f64, rho2: f64) -> f64 {
    let b = 2.5;
    let c = 1.5 * s.ln();
    let d = s * rho2;
    if c == 0.0 {
        return d / b;
    }
    (-b + (b * b + 4.0 * c * d).sqrt()) / (2.0 * c)
}

/// `γ(3/2, x)/x^{3/2}` for `x ≥ 0`.
fn lower_gamma_three_halves_scaled(x: f64) -> f64 {
    if x < 1.0 {
        let mut term = 1.0;
        let mut sum = 1.0 / 1.5;
        for k in 1..40 {
            term *= -x / k as f64;
            let add = term / (k as f64 + 1.5);
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        let rx = x.sqrt();
        (0.5 * std::f64::consts::PI.sqrt() * erf(rx) - rx * (-x).exp()) / (x * rx)
    }
}

fn eval_initial(rho: f64) -> SeriesValue {
    let rho2 = rho * rho;
    let n0 = MIN_DIRECT.max((DIRECT_PER_RHO * rho).ceil() as usize);
    let mut acc = LogSum::default();
    for n in 1..=n0 {
        acc.add(log_term(n as f64, 1.0, 0.0, rho2));
    }
    let nf = n0 as f64;
    // Σ_{n>N} f(n) ≈ ∫_N^∞ f - f(N)/2 - f'(N)/12,  f(n) = n^{-5/2} e^{-ρ²/n}
    let x = rho2 / nf;
    let integral = nf.powf(-1.5) * lower_gamma_three_halves_scaled(x);
    let f_n = nf.powf(-2.5) * (-x).exp();
    let df_n = f_n * (-2.5 / nf + rho2 / (nf * nf));
    let tail = integral - 0.5 * f_n - df_n / 12.0;
    let direct = acc.value() - 2.5 * LN_2;
    let total = if direct.is_finite() {
        direct + (tail * (-direct).exp()).ln_1p()
    } else {
        tail.ln()
    };
    SeriesValue {
        log_h: total + 2.5 * LN_2,
        last_index: n0,
        // next Euler–Maclaurin term f'''(N)/720 with |f'''| ≲ f·(5/N + ρ²/N²)³
        relative_residual: (f_n * (5.0 / nf + rho2 / (nf * nf)).powi(3) / 720.0) / (total.exp()),
    }
}

/// `ln H(t, ρ)` at shifted time `τ = t + t_shift` given as `s = τ + 1`.
pub fn series_log_h(s: f64, rho: f64) -> SeriesValue {
    if s == 1.0 {
        return eval_initial(rho);
    }
    let ln_s = s.ln();
    let rho2 = rho * rho;
    let peak = dominant_index(s, rho2).max(1.0);
    let center = peak.round().max(1.0) as usize;
    let peak_log = log_term(center as f64, s, ln_s, rho2);
    let mut acc = LogSum::default();
    acc.add(peak_log);
    let mut n = center;
    while n > 1 {
        n -= 1;
        let lt = log_term(n as f64, s, ln_s, rho2);
        acc.add(lt);
        if lt < peak_log - LOG_CUTOFF {
            break;
        }
    }
    let first = n;
    let mut n = center;
    let mut last_log;
    loop {
        n += 1;
        last_log = log_term(n as f64, s, ln_s, rho2);
        acc.add(last_log);
        if last_log < peak_log - LOG_CUTOFF && n as f64 > peak {
            break;
        }
    }
    let value = acc.value();
    // Upper tail: terms decrease geometrically with ratio at most r.
    let next = log_term((n + 1) as f64, s, ln_s, rho2);
    let ratio = (log_term((n + 2) as f64, s, ln_s, rho2) - next).exp();
    let upper = if ratio < 1.0 { (next - value).exp() / (1.0 - ratio) } else { f64::INFINITY };
    // Lower tail: fewer than `first` terms, each below the last one kept.
    let lower = if first > 1 {
        first as f64 * (log_term((first - 1) as f64, s, ln_s, rho2) - value).exp()
    } else {
        0.0
    };
    SeriesValue {
        log_h: value,
        last_index: n,
        relative_residual: upper + lower,
    }
}

/// The example's spectrum at one time, usable for `ρ ≤ rho_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSeriesSpectrum {
    pub t: f64,
    pub s: f64,
    pub rho_max: f64,
    /// Largest series index used at `rho_max`.
    pub truncation: usize,
    /// Largest relative residual over a scan of `[0, rho_max]`.
    pub truncation_residual: f64,
    pub warning: Option<String>,
}

impl GaussianSeriesSpectrum {
    /// `c_n(t)`.
    pub fn coefficient(&self, n: usize) -> f64 {
        log_coeff(n as f64, self.s.ln()).exp()
    }

    /// Gaussian width `s/n` of term `n`: the term is `c_n e^{-(s/n)ρ²}`.
    pub fn width(&self, n: usize) -> f64 {
        self.s / n as f64
    }

    pub fn log_h(&self, rho: f64) -> f64 {
        series_log_h(self.s, rho).log_h
    }

    pub fn h(&self, rho: f64) -> f64 {
        self.log_h(rho).exp()
    }

    /// `Σ_j |û_j|² = ρ²H²`, as `ln(ρ|H|)`.
    pub fn log_abs_u_hat(&self, rho: f64) -> f64 {
        rho.ln() + self.log_h(rho)
    }

    pub fn evaluate(&self, rho_grid: &[f64]) -> RadialSpectrum {
        let log_values: Vec<f64> = rho_grid.iter().map(|&r| self.log_h(r)).collect();
        RadialSpectrum {
            t: self.t,
            rho_grid: rho_grid.to_vec(),
            values: log_values.iter().map(|v| v.exp()).collect(),
            log_values,
        }
    }
}

/// Sampled radial profile `H(t, ρ)` on an increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSpectrum {
    pub t: f64,
    pub rho_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// `ln H`, finite even where `H` underflows.
    pub log_values: Vec<f64>,
}

impl RadialSpectrum {
    /// `ρ²H²`, the summed squared modulus of the three components.
    pub fn abs_u_hat_sq(&self) -> Vec<f64> {
        self.rho_grid
            .iter()
            .zip(&self.values)
            .map(|(r, h)| r * r * h * h)
            .collect()
    }
}

/// Build the spectrum at clock time `t` for `ρ ≤ rho_max`.
pub fn spectrum_series(t: f64, rho_max: f64, params: &ExampleParams) -> Result<GaussianSeriesSpectrum> {
    if !(rho_max > 0.0) {
        return Err(crate::error::LabError::InvalidArgument(format!(
            "rho_max must be positive, got {rho_max}"
        )));
    }
    let s = params.s(t)?;
    let warning = (s == 1.0 && rho_max > 1e3).then(|| {
        format!("t = 0 spectrum up to rho = {rho_max}: terms decay only like n^(-5/2), evaluation is slow")
    });
    let mut residual: f64 = 0.0;
    for i in 1..=32 {
        let v = series_log_h(s, rho_max * i as f64 / 32.0);
        residual = residual.max(v.relative_residual);
    }
    Ok(GaussianSeriesSpectrum {
        t,
        s,
        rho_max,
        truncation: series_log_h(s, rho_max).last_index,
        truncation_residual: residual,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_matches_plain_sum() {
        let s = 2.0;
        let rho = 0.8;
        let direct: f64 = (1..200)
            .map(|n| log_term(n as f64, s, s.ln(), rho * rho).exp())
            .sum();
        let v = series_log_h(s, rho);
        assert!((v.log_h.exp() / direct - 1.0).abs() < 1e-14);
        assert!(v.relative_residual < 1e-15);
    }

    #[test]
    fn initial_profile_has_coulomb_tail() {
        let v = series_log_h(1.0, 300.0);
        let scaled = v.log_h.exp() * 300f64.powi(3);
        assert!((scaled / initial_tail_constant() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn initial_profile_at_origin_is_zeta() {
        // H(0, 0) = 2^{5/2} ζ(5/2)
        let zeta_5_2 = 1.341_487_257_250_917_2;
        let v = series_log_h(1.0, 0.0).log_h.exp();
        assert!((v / (2f64.powf(2.5) * zeta_5_2) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn truncation_residual_is_tiny() {
        let sp = spectrum_series(1.0, 50.0, &ExampleParams::default()).unwrap();
        assert!(sp.truncation_residual < 1e-15);
        assert!(sp.warning.is_none());
    }
}
