use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::WavenumberGrid;
use crate::error::{LabError, Result};
use crate::sum::det_sum_by;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Fourier coefficients of a real 3-component vector field on a periodic box.
///
/// Convention: `û_k = L⁻³ ∫ u e^{-ik·x} dx`, approximated by the normalized
/// DFT of the samples at `x_j = j·L/n`. Modes outside the dealiasing mask are
/// kept at exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: WavenumberGrid,
    coeffs: [Vec<Complex64>; 3],
    time: f64,
}

impl SpectralField {
    pub fn zeros(grid: &WavenumberGrid) -> Self {
        let len = grid.len();
        Self {
            grid: grid.clone(),
            coeffs: [vec![ZERO; len], vec![ZERO; len], vec![ZERO; len]],
            time: 0.0,
        }
    }

    /// Wrap raw coefficient arrays; modes outside the mask are zeroed.
    pub fn from_coeffs(grid: &WavenumberGrid, coeffs: [Vec<Complex64>; 3], time: f64) -> Result<Self> {
        for c in &coeffs {
            if c.len() != grid.len() {
                return Err(LabError::ShapeMismatch {
                    expected: grid.len(),
                    actual: c.len(),
                });
            }
        }
        let mut f = Self {
            grid: grid.clone(),
            coeffs,
            time,
        };
        f.apply_mask();
        Ok(f)
    }

    /// Analyze physical samples, one `n³` array per component.
    pub fn from_physical(grid: &WavenumberGrid, samples: &[Vec<f64>; 3]) -> Result<Self> {
        for s in samples {
            if s.len() != grid.len() {
                return Err(LabError::ShapeMismatch {
                    expected: grid.len(),
                    actual: s.len(),
                });
            }
        }
        let (c0, c1) = analyze_pair(grid, &samples[0], Some(&samples[1]));
        let (c2, _) = analyze_pair(grid, &samples[2], None);
        Ok(Self {
            grid: grid.clone(),
            coeffs: [c0, c1.expect("paired"), c2],
            time: 0.0,
        })
    }

    /// Analyze a flat component-major sample array of length `3n³`.
    pub fn from_physical_flat(grid: &WavenumberGrid, samples: &[f64]) -> Result<Self> {
        let len = grid.len();
        if samples.len() != 3 * len {
            return Err(LabError::ShapeMismatch {
                expected: 3 * len,
                actual: samples.len(),
            });
        }
        let parts = [
            samples[..len].to_vec(),
            samples[len..2 * len].to_vec(),
            samples[2 * len..].to_vec(),
        ];
        Self::from_physical(grid, &parts)
    }

    /// Synthesize physical samples, one `n³` array per component.
    pub fn to_physical(&self) -> [Vec<f64>; 3] {
        let (a, b) = synthesize_pair(&self.grid, &self.coeffs[0], Some(&self.coeffs[1]));
        let (c, _) = synthesize_pair(&self.grid, &self.coeffs[2], None);
        [a, b.expect("paired"), c]
    }

    pub fn to_physical_flat(&self) -> Vec<f64> {
        let [a, b, c] = self.to_physical();
        let mut out = a;
        out.extend(b);
        out.extend(c);
        out
    }

    pub fn grid(&self) -> &WavenumberGrid {
        &self.grid
    }
    pub fn time(&self) -> f64 {
        self.time
    }
    pub fn set_time(&mut self, t: f64) {
        self.time = t;
    }
    pub fn with_time(mut self, t: f64) -> Self {
        self.time = t;
        self
    }
    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.coeffs[c]
    }
    pub fn components(&self) -> &[Vec<Complex64>; 3] {
        &self.coeffs
    }
    pub fn coeff(&self, idx: usize) -> [Complex64; 3] {
        [self.coeffs[0][idx], self.coeffs[1][idx], self.coeffs[2][idx]]
    }
    pub fn set_coeff(&mut self, idx: usize, v: [Complex64; 3]) {
        if self.grid.is_retained(idx) {
            for c in 0..3 {
                self.coeffs[c][idx] = v[c];
            }
        }
    }

    /// Apply a per-mode map on retained modes; other modes stay zero.
    pub fn map_modes<F>(&self, f: F) -> Self
    where
        F: Fn(usize, [Complex64; 3]) -> [Complex64; 3] + Sync,
    {
        let mask = self.grid.mask();
        let vals: Vec<[Complex64; 3]> = (0..self.grid.len())
            .into_par_iter()
            .map(|i| if mask[i] { f(i, self.coeff(i)) } else { [ZERO; 3] })
            .collect();
        let mut coeffs = [Vec::with_capacity(vals.len()), Vec::with_capacity(vals.len()), Vec::with_capacity(vals.len())];
        for v in vals {
            for c in 0..3 {
                coeffs[c].push(v[c]);
            }
        }
        Self {
            grid: self.grid.clone(),
            coeffs,
            time: self.time,
        }
    }

    /// Multiply every mode by a real factor depending on the mode index.
    pub fn scale_modes<F>(&self, factor: F) -> Self
    where
        F: Fn(usize) -> f64 + Sync,
    {
        self.map_modes(|i, v| {
            let s = factor(i);
            [v[0] * s, v[1] * s, v[2] * s]
        })
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(LabError::GridMismatch)
        }
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        let mut out = self.clone();
        if alpha == 0.0 {
            return Ok(out);
        }
        for c in 0..3 {
            out.coeffs[c]
                .par_iter_mut()
                .zip(&other.coeffs[c])
                .for_each(|(a, b)| *a += b * alpha);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        for c in 0..3 {
            out.coeffs[c].par_iter_mut().for_each(|a| *a *= alpha);
        }
        out
    }

    /// `L³ Σ_k Re(conj(û_k)·v̂_k)`, the L² inner product.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_grid(other)?;
        let ret = self.grid.retained();
        let s = det_sum_by(ret.len(), |r| {
            let i = ret[r];
            (0..3).map(|c| (self.coeffs[c][i].conj() * other.coeffs[c][i]).re).sum::<f64>()
        });
        Ok(self.grid.volume() * s)
    }

    /// Largest `|û(-k) - conj(û(k))|` over all modes.
    pub fn hermitian_defect(&self) -> f64 {
        let g = &self.grid;
        (0..g.len())
            .into_par_iter()
            .map(|i| {
                let j = g.conjugate_index(i);
                (0..3)
                    .map(|c| (self.coeffs[c][j] - self.coeffs[c][i].conj()).norm())
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }

    /// Replace each pair by its Hermitian average.
    pub fn enforce_hermitian(&mut self) {
        let g = self.grid.clone();
        for c in 0..3 {
            let old = self.coeffs[c].clone();
            self.coeffs[c].par_iter_mut().enumerate().for_each(|(i, v)| {
                let j = g.conjugate_index(i);
                *v = 0.5 * (old[i] + old[j].conj());
            });
        }
        self.apply_mask();
    }

    /// `max_k |k·û(k)| / ‖û‖_ℓ²` over `k ≠ 0`.
    pub fn divergence_ratio(&self) -> f64 {
        let g = &self.grid;
        let total: f64 = (0..3)
            .map(|c| self.coeffs[c].iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt();
        if total == 0.0 {
            return 0.0;
        }
        let max = g
            .retained()
            .par_iter()
            .map(|&i| {
                let k = g.wavevector(i);
                let d = self.coeffs[0][i] * k[0] + self.coeffs[1][i] * k[1] + self.coeffs[2][i] * k[2];
                let kn = g.k_norm(i);
                if kn == 0.0 { 0.0 } else { d.norm() / kn }
            })
            .reduce(|| 0.0, f64::max);
        max / total
    }

    pub fn max_abs_coeff(&self) -> f64 {
        (0..3)
            .map(|c| self.coeffs[c].iter().map(|v| v.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
    }

    pub(crate) fn apply_mask(&mut self) {
        let mask = self.grid.mask();
        for c in 0..3 {
            self.coeffs[c]
                .par_iter_mut()
                .zip(mask)
                .for_each(|(v, &keep)| {
                    if !keep {
                        *v = ZERO;
                    }
                });
        }
    }
}

/// Inverse transform of one or two Hermitian spectra with a single complex FFT:
/// the real parts carry `a`, the imaginary parts carry `b`.
pub(crate) fn synthesize_pair(
    grid: &WavenumberGrid,
    a: &[Complex64],
    b: Option<&[Complex64]>,
) -> (Vec<f64>, Option<Vec<f64>>) {
    let mut buf: Vec<Complex64> = match b {
        Some(b) => a
            .par_iter()
            .zip(b)
            .map(|(x, y)| x + Complex64::new(-y.im, y.re))
            .collect(),
        None => a.to_vec(),
    };
    grid.fft().inverse(&mut buf);
    let re = buf.par_iter().map(|v| v.re).collect();
    let im = b.map(|_| buf.par_iter().map(|v| v.im).collect());
    (re, im)
}

/// Forward transform of one or two real arrays with a single complex FFT,
/// normalized by `n⁻³` and masked.
pub(crate) fn analyze_pair(
    grid: &WavenumberGrid,
    x: &[f64],
    y: Option<&[f64]>,
) -> (Vec<Complex64>, Option<Vec<Complex64>>) {
    let len = grid.len();
    let norm = 1.0 / len as f64;
    let mut buf: Vec<Complex64> = match y {
        Some(y) => x.par_iter().zip(y).map(|(&a, &b)| Complex64::new(a, b)).collect(),
        None => x.par_iter().map(|&a| Complex64::new(a, 0.0)).collect(),
    };
    grid.fft().forward(&mut buf);
    let mask = grid.mask();
    match y {
        None => {
            let out = (0..len)
                .into_par_iter()
                .map(|i| {
                    if !mask[i] {
                        return ZERO;
                    }
                    // Hermitian average removes the O(ε) asymmetry of round-off.
                    let j = grid.conjugate_index(i);
                    0.5 * (buf[i] + buf[j].conj()) * norm
                })
                .collect();
            (out, None)
        }
        Some(_) => {
            let (xs, ys): (Vec<Complex64>, Vec<Complex64>) = (0..len)
                .into_par_iter()
                .map(|i| {
                    if !mask[i] {
                        return (ZERO, ZERO);
                    }
                    let j = grid.conjugate_index(i);
                    let zc = buf[j].conj();
                    let xk = 0.5 * (buf[i] + zc) * norm;
                    let d = 0.5 * (buf[i] - zc) * norm;
                    (xk, Complex64::new(d.im, -d.re))
                })
                .unzip();
            (xs, Some(ys))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::build_grid;
    use std::f64::consts::PI;

    #[test]
    fn constant_field_has_only_zero_mode() {
        let g = build_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let c = [1.5, -2.0, 0.25];
        let samples = [vec![c[0]; g.len()], vec![c[1]; g.len()], vec![c[2]; g.len()]];
        let f = SpectralField::from_physical(&g, &samples).unwrap();
        for i in 0..g.len() {
            let v = f.coeff(i);
            for d in 0..3 {
                let expect = if i == 0 { c[d] } else { 0.0 };
                assert!((v[d] - Complex64::new(expect, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn cosine_splits_into_two_half_modes() {
        let g = build_grid(8, 2.0 * PI, 2.0 / 3.0).unwrap();
        let n = g.n();
        let mut s = [vec![0.0; g.len()], vec![0.0; g.len()], vec![0.0; g.len()]];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    s[0][g.index(i, j, k)] = g.coordinate(i).cos();
                }
            }
        }
        let f = SpectralField::from_physical(&g, &s).unwrap();
        let p = g.index_of_mode([1, 0, 0]);
        let m = g.index_of_mode([-1, 0, 0]);
        assert!((f.coeff(p)[0] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!((f.coeff(m)[0] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        let rest: f64 = (0..g.len())
            .filter(|&i| i != p && i != m)
            .map(|i| f.coeff(i)[0].norm())
            .sum();
        assert!(rest < 1e-13);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let g = build_grid(4, 1.0, 1.0).unwrap();
        let err = SpectralField::from_physical_flat(&g, &[0.0; 10]).unwrap_err();
        assert!(matches!(err, LabError::ShapeMismatch { expected: 192, actual: 10 }));
    }
}
