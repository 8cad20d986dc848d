use std::fmt;
use std::sync::Arc;

use super::fft::Fft3;
use crate::error::{LabError, Result};

/// Cubic periodic box of side `L` sampled on `n³` points, with the
/// wavenumber lattice `(2π/L)·m`, `m ∈ [-n/2, n/2)³`, and a cube-shaped
/// dealiasing mask `|mᵢ| ≤ dealias·n/2`.
///
/// Cloning is cheap: lattice tables and FFT plans are shared.
#[derive(Clone)]
pub struct WavenumberGrid {
    inner: Arc<GridData>,
}

struct GridData {
    n: usize,
    box_length: f64,
    dealias: f64,
    cutoff: i64,
    kvec: Vec<[f64; 3]>,
    kmag: Vec<f64>,
    msq: Vec<u32>,
    mask: Vec<bool>,
    retained: Vec<usize>,
    fft: Fft3,
}

impl fmt::Debug for WavenumberGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WavenumberGrid")
            .field("n", &self.n())
            .field("box_length", &self.box_length())
            .field("dealias", &self.dealias())
            .finish()
    }
}

impl PartialEq for WavenumberGrid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.n() == other.n()
                && self.box_length().to_bits() == other.box_length().to_bits()
                && self.dealias().to_bits() == other.dealias().to_bits())
    }
}

/// Signed frequency of FFT index `i` on an `n`-point axis.
#[inline]
pub fn signed_freq(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

impl WavenumberGrid {
    pub fn new(n: usize, box_length: f64, dealias: f64) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(LabError::InvalidGrid(format!(
                "points per axis must be even and at least 4, got {n}"
            )));
        }
        if !(box_length > 0.0 && box_length.is_finite()) {
            return Err(LabError::InvalidGrid(format!("box length must be positive, got {box_length}")));
        }
        if !(dealias > 0.0 && dealias <= 1.0) {
            return Err(LabError::InvalidGrid(format!("dealias fraction must lie in (0, 1], got {dealias}")));
        }
        let cutoff = (dealias * n as f64 / 2.0 + 1e-12).floor() as i64;
        let base = 2.0 * std::f64::consts::PI / box_length;
        let total = n * n * n;
        let mut kvec = Vec::with_capacity(total);
        let mut kmag = Vec::with_capacity(total);
        let mut msq = Vec::with_capacity(total);
        let mut mask = Vec::with_capacity(total);
        let mut retained = Vec::new();
        for i in 0..n {
            let mi = signed_freq(i, n);
            for j in 0..n {
                let mj = signed_freq(j, n);
                for k in 0..n {
                    let mk = signed_freq(k, n);
                    let kv = [base * mi as f64, base * mj as f64, base * mk as f64];
                    let keep = mi.abs() <= cutoff && mj.abs() <= cutoff && mk.abs() <= cutoff;
                    if keep {
                        retained.push(kvec.len());
                    }
                    msq.push((mi * mi + mj * mj + mk * mk) as u32);
                    kmag.push((kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2]).sqrt());
                    kvec.push(kv);
                    mask.push(keep);
                }
            }
        }
        Ok(Self {
            inner: Arc::new(GridData {
                n,
                box_length,
                dealias,
                cutoff,
                kvec,
                kmag,
                msq,
                mask,
                retained,
                fft: Fft3::new(n),
            }),
        })
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }
    pub fn box_length(&self) -> f64 {
        self.inner.box_length
    }
    pub fn dealias(&self) -> f64 {
        self.inner.dealias
    }
    /// Largest retained `|mᵢ|` per axis.
    pub fn cutoff(&self) -> i64 {
        self.inner.cutoff
    }
    /// Lattice spacing `2π/L`.
    pub fn base_wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.inner.box_length
    }
    pub fn len(&self) -> usize {
        self.inner.kvec.len()
    }
    pub fn is_empty(&self) -> bool {
        self.inner.kvec.is_empty()
    }
    pub fn volume(&self) -> f64 {
        self.inner.box_length.powi(3)
    }
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.inner.n;
        (i * n + j) * n + k
    }
    /// Index of the lattice point with integer coordinates `m` (taken mod n).
    pub fn index_of_mode(&self, m: [i64; 3]) -> usize {
        let n = self.inner.n as i64;
        let w = |v: i64| v.rem_euclid(n) as usize;
        self.index(w(m[0]), w(m[1]), w(m[2]))
    }
    pub fn mode(&self, idx: usize) -> [i64; 3] {
        let n = self.inner.n;
        [
            signed_freq(idx / (n * n), n),
            signed_freq((idx / n) % n, n),
            signed_freq(idx % n, n),
        ]
    }
    /// `|m|²` of the integer lattice point at `idx`.
    pub fn mode_sq(&self, idx: usize) -> usize {
        self.inner.msq[idx] as usize
    }
    /// Largest `|m|²` over retained modes.
    pub fn max_mode_sq(&self) -> usize {
        3 * (self.inner.cutoff * self.inner.cutoff) as usize
    }
    /// Index of `-m` (mod n).
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let m = self.mode(idx);
        self.index_of_mode([-m[0], -m[1], -m[2]])
    }
    pub fn wavevector(&self, idx: usize) -> [f64; 3] {
        self.inner.kvec[idx]
    }
    pub fn wavevectors(&self) -> &[[f64; 3]] {
        &self.inner.kvec
    }
    pub fn k_norm(&self, idx: usize) -> f64 {
        self.inner.kmag[idx]
    }
    pub fn k_norms(&self) -> &[f64] {
        &self.inner.kmag
    }
    pub fn is_retained(&self, idx: usize) -> bool {
        self.inner.mask[idx]
    }
    pub fn mask(&self) -> &[bool] {
        &self.inner.mask
    }
    /// Retained indices in lexicographic `(i, j, k)` order.
    pub fn retained(&self) -> &[usize] {
        &self.inner.retained
    }
    /// Largest `|k|` over retained modes.
    pub fn k_max(&self) -> f64 {
        self.base_wavenumber() * self.inner.cutoff as f64 * 3f64.sqrt()
    }
    /// Physical coordinate of sample index `j` along an axis.
    pub fn coordinate(&self, j: usize) -> f64 {
        j as f64 * self.inner.box_length / self.inner.n as f64
    }
    pub(crate) fn fft(&self) -> &Fft3 {
        &self.inner.fft
    }
}

/// Convenience wrapper matching the operation name used in docs and the CLI.
pub fn build_grid(n: usize, box_length: f64, dealias: f64) -> Result<WavenumberGrid> {
    WavenumberGrid::new(n, box_length, dealias)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_thirds_rule_on_eight_points() {
        let g = build_grid(8, 2.0 * std::f64::consts::PI, 2.0 / 3.0).unwrap();
        assert_eq!(g.cutoff(), 2);
        assert!((g.base_wavenumber() - 1.0).abs() < 1e-15);
        assert_eq!(g.retained().len(), 5 * 5 * 5);
        let idx = g.index_of_mode([3, 0, 0]);
        assert!(!g.is_retained(idx));
        assert!(g.is_retained(g.index_of_mode([-2, 2, 1])));
    }

    #[test]
    fn fully_retained_small_grid() {
        let g = build_grid(4, 1.0, 1.0).unwrap();
        assert_eq!(g.retained().len(), 64);
        let two_pi = 2.0 * std::f64::consts::PI;
        let freqs: Vec<f64> = (0..4).map(|i| g.wavevector(g.index(i, 0, 0))[0] / two_pi).collect();
        assert_eq!(freqs, vec![0.0, 1.0, -2.0, -1.0]);
    }

    #[test]
    fn rejects_odd_or_tiny() {
        assert!(matches!(build_grid(7, 1.0, 2.0 / 3.0), Err(LabError::InvalidGrid(_))));
        assert!(build_grid(2, 1.0, 1.0).is_err());
        assert!(build_grid(8, -1.0, 1.0).is_err());
        assert!(build_grid(8, 1.0, 1.5).is_err());
    }

    #[test]
    fn retained_set_symmetric() {
        for &(n, d) in &[(8usize, 2.0 / 3.0), (12, 0.5), (4, 1.0)] {
            let g = build_grid(n, 3.0, d).unwrap();
            for &idx in g.retained() {
                assert!(g.is_retained(g.conjugate_index(idx)));
            }
        }
    }
}
