use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

/// Planned 3D complex FFT on an `n³` cube stored in `(i, j, k)` row-major order.
///
/// Each pass transforms the contiguous axis and then rotates the axes
/// `(i, j, k) -> (j, k, i)`; three passes restore the original layout.
pub(crate) struct Fft3 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft3 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// Unnormalized forward transform `Σ_x f(x) e^{-ik·x}`.
    pub fn forward(&self, data: &mut Vec<Complex64>) {
        self.run(data, &self.forward);
    }

    /// Unnormalized inverse transform `Σ_k f̂(k) e^{ik·x}`.
    pub fn inverse(&self, data: &mut Vec<Complex64>) {
        self.run(data, &self.inverse);
    }

    fn run(&self, data: &mut Vec<Complex64>, plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        debug_assert_eq!(data.len(), n * n * n);
        let mut scratch = vec![Complex64::new(0.0, 0.0); data.len()];
        let work = plan.get_inplace_scratch_len();
        for _ in 0..3 {
            data.par_chunks_mut(n * n).for_each_init(
                || vec![Complex64::new(0.0, 0.0); work],
                |buf, plane| plan.process_with_scratch(plane, buf),
            );
            rotate_axes(data, &mut scratch, n);
            std::mem::swap(data, &mut scratch);
        }
    }
}

const TILE: usize = 8;

/// `out[(j, k, i)] = input[(i, j, k)]`, reading runs of `TILE` along `k`.
fn rotate_axes(input: &[Complex64], out: &mut [Complex64], n: usize) {
    out.par_chunks_mut(n * n).enumerate().for_each(|(j, slab)| {
        for k0 in (0..n).step_by(TILE) {
            let k1 = (k0 + TILE).min(n);
            for i in 0..n {
                let src = &input[(i * n + j) * n + k0..(i * n + j) * n + k1];
                for (dk, v) in src.iter().enumerate() {
                    slab[(k0 + dk) * n + i] = *v;
                }
            }
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(data: &[Complex64], n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
        let w = -2.0 * std::f64::consts::PI / n as f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        for j in 0..n {
                            for k in 0..n {
                                let ph = w * ((a * i + b * j + c * k) as f64);
                                acc += data[(i * n + j) * n + k] * Complex64::from_polar(1.0, ph);
                            }
                        }
                    }
                    out[(a * n + b) * n + c] = acc;
                }
            }
        }
        out
    }

    #[test]
    fn matches_naive_dft() {
        let n = 4;
        let data: Vec<Complex64> = (0..n * n * n)
            .map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let expect = naive_dft(&data, n);
        let mut got = data.clone();
        Fft3::new(n).forward(&mut got);
        for (g, e) in got.iter().zip(&expect) {
            assert!((g - e).norm() < 1e-12);
        }
    }
}
