//! Analyticity radius from the exponential decay rate of Fourier data.
//!
//! Model: `ln a(k) = -rad·k + b·ln k + c`. The algebraic factor absorbs the
//! power-law prefactor of the spectrum, which would otherwise bias a plain
//! exponential fit over the short windows available on a grid.

use serde::Serialize;

use super::fit::least_squares;
use crate::oracle::{series_log_h, ExampleParams, RadialSpectrum};
use crate::error::Result;
use crate::spectral::SpectralField;

const MIN_SHELLS: usize = 5;
/// Shells whose maximum falls below this fraction of the peak are noise.
const NOISE_FLOOR: f64 = 1e3 * 1e-16;
/// Dominant series index at the lower end of the radial window.
const RADIAL_WINDOW_INDEX: f64 = 40.0;
const RADIAL_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusEstimate {
    pub time: f64,
    /// Estimated radius (decay rate).
    pub slope: f64,
    pub window: (f64, f64),
    pub stderr: f64,
    pub reliable: bool,
    pub samples: usize,
}

fn fit_points(time: f64, ks: &[f64], logs: &[f64]) -> RadiusEstimate {
    let window = (
        ks.first().copied().unwrap_or(0.0),
        ks.last().copied().unwrap_or(0.0),
    );
    let unreliable = RadiusEstimate {
        time,
        slope: 0.0,
        window,
        stderr: f64::INFINITY,
        reliable: false,
        samples: ks.len(),
    };
    if ks.len() < 3 {
        return unreliable;
    }
    let columns = [
        ks.iter().map(|k| -k).collect::<Vec<_>>(),
        ks.iter().map(|k| k.ln()).collect(),
        vec![1.0; ks.len()],
    ];
    match least_squares(&columns, logs) {
        Some(fit) => RadiusEstimate {
            time,
            slope: fit.coeffs[0],
            window,
            stderr: fit.stderr[0],
            reliable: ks.len() >= MIN_SHELLS && fit.coeffs[0] >= 0.0,
            samples: ks.len(),
        },
        None => unreliable,
    }
}

/// Shell maxima of `|û(k)|` binned by `round(|m|)`; each entry is
/// `(|k| of the maximizing mode, maximum)`.
pub fn shell_maxima(f: &SpectralField) -> Vec<(f64, f64)> {
    let g = f.grid();
    let shells = (g.max_mode_sq() as f64).sqrt().round() as usize + 1;
    let mut best = vec![(0.0, 0.0); shells];
    for &i in g.retained() {
        let j = (g.mode_sq(i) as f64).sqrt().round() as usize;
        let c = f.coeff(i);
        let a = (c[0].norm_sqr() + c[1].norm_sqr() + c[2].norm_sqr()).sqrt();
        if a > best[j].1 {
            best[j] = (g.k_norm(i), a);
        }
    }
    best
}

/// Tail decay rate of a torus field from its shell maxima.
pub fn estimate_radius(f: &SpectralField) -> RadiusEstimate {
    let maxima = shell_maxima(f);
    let time = f.time();
    let peak_shell = (1..maxima.len())
        .max_by(|&a, &b| maxima[a].1.total_cmp(&maxima[b].1))
        .unwrap_or(0);
    let peak = maxima.get(peak_shell).map(|m| m.1).unwrap_or(0.0);
    if peak == 0.0 {
        return fit_points(time, &[], &[]);
    }
    let last = (f.grid().cutoff() - 2).max(0) as usize;
    let mut ks = Vec::new();
    let mut logs = Vec::new();
    for (k, a) in maxima.iter().take(last + 1).skip(peak_shell + 1) {
        if *a < NOISE_FLOOR * peak {
            break;
        }
        ks.push(*k);
        logs.push(a.ln());
    }
    fit_points(time, &ks, &logs)
}

/// Decay rate of `ρ|H(ρ)|` over all samples of a radial spectrum.
pub fn estimate_radius_radial(spec: &RadialSpectrum) -> RadiusEstimate {
    let (ks, logs): (Vec<f64>, Vec<f64>) = spec
        .rho_grid
        .iter()
        .zip(&spec.log_values)
        .filter(|(r, v)| **r > 0.0 && v.is_finite())
        .map(|(r, v)| (*r, r.ln() + v))
        .unzip();
    fit_points(spec.t, &ks, &logs)
}

/// `[ρ_lo, 4ρ_lo]` where the dominant series index at `ρ_lo` is 40.
pub fn radial_window(s: f64) -> (f64, f64) {
    let lo = RADIAL_WINDOW_INDEX * (1.5 * s.ln() / s).sqrt();
    (lo, 4.0 * lo)
}

/// Radius estimate for the example at clock time `t > 0` from its series
/// spectrum sampled on the standard window.
pub fn estimate_radius_oracle(t: f64, params: &ExampleParams) -> Result<RadiusEstimate> {
    let s = params.s(t)?;
    let (lo, hi) = radial_window(s);
    let rho_grid: Vec<f64> = (0..RADIAL_SAMPLES)
        .map(|i| lo + (hi - lo) * i as f64 / (RADIAL_SAMPLES - 1) as f64)
        .collect();
    let log_values: Vec<f64> = rho_grid.iter().map(|&r| series_log_h(s, r).log_h).collect();
    let spec = RadialSpectrum {
        t,
        values: log_values.iter().map(|v| v.exp()).collect(),
        rho_grid,
        log_values,
    };
    Ok(estimate_radius_radial(&spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{build_grid, RandomFieldSpec};
    use num_complex::Complex64;

    fn synthetic(a: f64) -> SpectralField {
        let g = build_grid(32, 2.0 * std::f64::consts::PI, 2.0 / 3.0).unwrap();
        let z = SpectralField::zeros(&g);
        let gg = g.clone();
        z.map_modes(|i, _| {
            let k = gg.k_norm(i);
            [Complex64::new((-a * k).exp(), 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]
        })
    }

    #[test]
    fn recovers_constructed_decay() {
        let e = estimate_radius(&synthetic(0.7));
        assert!(e.reliable);
        assert!((e.slope - 0.7).abs() < 0.007, "{e:?}");
    }

    #[test]
    fn scale_invariant() {
        let f = synthetic(0.7);
        let a = estimate_radius(&f);
        let b = estimate_radius(&f.scaled(-37.5));
        assert!((a.slope - b.slope).abs() <= 1e-12);
    }

    #[test]
    fn white_noise_has_no_radius() {
        let g = build_grid(32, 2.0 * std::f64::consts::PI, 2.0 / 3.0).unwrap();
        let f = RandomFieldSpec::new(0.0, 5).generate(&g);
        let e = estimate_radius(&f);
        assert!(!e.reliable || e.slope.abs() < 0.1, "{e:?}");
    }

    #[test]
    fn zero_field_is_unreliable() {
        let g = build_grid(8, 1.0, 2.0 / 3.0).unwrap();
        let e = estimate_radius(&SpectralField::zeros(&g));
        assert!(!e.reliable);
        assert_eq!(e.slope, 0.0);
    }
}
