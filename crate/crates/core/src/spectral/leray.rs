use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::SpectralField;

/// How the projection treats the `k = 0` mode, where `k̂` is undefined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ZeroModeRule {
    /// `P(0) = I`: the mean flow is left untouched.
    #[default]
    Identity,
    /// The mean flow is removed.
    Annihilate,
}

/// `(I - k̂k̂ᵀ)v` for a single mode.
#[inline]
pub fn project_mode(k: [f64; 3], v: [Complex64; 3]) -> [Complex64; 3] {
    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if k2 == 0.0 {
        return v;
    }
    let dot = (v[0] * k[0] + v[1] * k[1] + v[2] * k[2]) / k2;
    [v[0] - dot * k[0], v[1] - dot * k[1], v[2] - dot * k[2]]
}

pub fn leray_project_with(f: &SpectralField, rule: ZeroModeRule) -> SpectralField {
    let g = f.grid().clone();
    f.map_modes(|i, v| {
        if i == 0 {
            match rule {
                ZeroModeRule::Identity => v,
                ZeroModeRule::Annihilate => [Complex64::new(0.0, 0.0); 3],
            }
        } else {
            project_mode(g.wavevector(i), v)
        }
    })
}

pub fn leray_project(f: &SpectralField) -> SpectralField {
    leray_project_with(f, ZeroModeRule::Identity)
}
