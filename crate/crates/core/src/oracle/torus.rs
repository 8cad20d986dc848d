//! The example restricted to a periodic box.

use num_complex::Complex64;
use rayon::prelude::*;

use super::physical::{eval_physical, ExampleParams};
use super::spectrum::series_log_h;
use crate::error::Result;
use crate::spectral::{SpectralField, WavenumberGrid};

/// How the ℝ³ field is turned into torus Fourier coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusRoute {
    /// Sample the periodization `Σ_{|n_i| ≤ images} u(x + nL)` on the grid
    /// (coordinates centred on the origin) and transform.
    Physical { images: i32 },
    /// Exact coefficients of the periodization by Poisson summation,
    /// `û_k = (2π)^{3/2} L^{-3} i k H(|k|)`.
    Spectral,
}

impl Default for TorusRoute {
    fn default() -> Self {
        TorusRoute::Physical { images: 1 }
    }
}

/// Centred coordinate `x - L·round(x/L)`.
fn centred(x: f64, l: f64) -> f64 {
    x - l * (x / l).round()
}

/// Physical samples of the periodized example, one `n³` array per component.
pub fn periodized_samples(t: f64, grid: &WavenumberGrid, params: &ExampleParams, images: i32) -> Result<[Vec<f64>; 3]> {
    let n = grid.n();
    let l = grid.box_length();
    let values: Vec<Result<[f64; 3]>> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
            let y = [
                centred(grid.coordinate(i), l),
                centred(grid.coordinate(j), l),
                centred(grid.coordinate(k), l),
            ];
            let mut acc = [0.0; 3];
            for a in -images..=images {
                for b in -images..=images {
                    for c in -images..=images {
                        let x = [y[0] + a as f64 * l, y[1] + b as f64 * l, y[2] + c as f64 * l];
                        let (_, u) = eval_physical(t, x, params)?;
                        for d in 0..3 {
                            acc[d] += u[d];
                        }
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let mut out = [vec![0.0; grid.len()], vec![0.0; grid.len()], vec![0.0; grid.len()]];
    for (idx, v) in values.into_iter().enumerate() {
        let v = v?;
        for d in 0..3 {
            out[d][idx] = v[d];
        }
    }
    Ok(out)
}

/// Torus Fourier coefficients of the example at clock time `t`.
pub fn sample_on_torus(t: f64, grid: &WavenumberGrid, params: &ExampleParams, route: TorusRoute) -> Result<SpectralField> {
    match route {
        TorusRoute::Physical { images } => {
            let samples = periodized_samples(t, grid, params, images)?;
            Ok(SpectralField::from_physical(grid, &samples)?.with_time(t))
        }
        TorusRoute::Spectral => {
            let s = params.s(t)?;
            let base = grid.base_wavenumber();
            let scale = (2.0 * std::f64::consts::PI).powf(1.5) / grid.volume();
            let table: Vec<f64> = (0..=grid.max_mode_sq())
                .into_par_iter()
                .map(|msq| {
                    if msq == 0 {
                        0.0
                    } else {
                        scale * series_log_h(s, base * (msq as f64).sqrt()).log_h.exp()
                    }
                })
                .collect();
            let zero = SpectralField::zeros(grid);
            let g = grid.clone();
            Ok(zero
                .map_modes(|i, _| {
                    let h = table[g.mode_sq(i)];
                    let k = g.wavevector(i);
                    k.map(|kc| Complex64::new(0.0, kc * h))
                })
                .with_time(t))
        }
    }
}
