use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::SpectralField;
use super::grid::WavenumberGrid;

/// Seeded random field with `|û(k)| ∝ |k|^{-β}` and uniform phases.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomFieldSpec {
    pub beta: f64,
    pub seed: u64,
    pub mean_zero: bool,
    /// Keep only modes with `|k| ≤ band` when set.
    pub band: Option<f64>,
}

impl RandomFieldSpec {
    pub fn new(beta: f64, seed: u64) -> Self {
        Self {
            beta,
            seed,
            mean_zero: true,
            band: None,
        }
    }

    pub fn band_limited(mut self, band: f64) -> Self {
        self.band = Some(band);
        self
    }

    pub fn with_mean(mut self) -> Self {
        self.mean_zero = false;
        self
    }

    pub fn generate(&self, grid: &WavenumberGrid) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut f = SpectralField::zeros(grid);
        for &i in grid.retained() {
            let j = grid.conjugate_index(i);
            if j < i {
                continue;
            }
            let k = grid.k_norm(i);
            // Draw before filtering so the sequence does not depend on the band.
            let phases: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
            let amps: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
            if k == 0.0 && self.mean_zero {
                continue;
            }
            if self.band.is_some_and(|b| k > b) {
                continue;
            }
            let envelope = if k == 0.0 { 1.0 } else { k.powf(-self.beta) };
            let v: [Complex64; 3] = std::array::from_fn(|c| {
                let a = envelope * (0.5 + amps[c]);
                if i == j {
                    Complex64::new(a * (2.0 * std::f64::consts::PI * phases[c]).cos(), 0.0)
                } else {
                    Complex64::from_polar(a, 2.0 * std::f64::consts::PI * phases[c])
                }
            });
            f.set_coeff(i, v);
            if i != j {
                f.set_coeff(j, v.map(|z| z.conj()));
            }
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::build_grid;

    #[test]
    fn hermitian_and_seeded() {
        let g = build_grid(8, 2.0, 1.0).unwrap();
        let a = RandomFieldSpec::new(1.5, 7).generate(&g);
        let b = RandomFieldSpec::new(1.5, 7).generate(&g);
        let c = RandomFieldSpec::new(1.5, 8).generate(&g);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.hermitian_defect(), 0.0);
        assert_eq!(a.coeff(0)[0], Complex64::new(0.0, 0.0));
    }
}
