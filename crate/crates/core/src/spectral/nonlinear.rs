use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::{analyze_pair, synthesize_pair, SpectralField};
use super::leray::{leray_project_with, ZeroModeRule};
use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Projection {
    #[default]
    Leray,
    Identity,
}

/// Model `∂ₜu + P(Mu·∇)u = Δu`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub m: [[f64; 3]; 3],
    pub projection: Projection,
    pub zero_mode_rule: ZeroModeRule,
}

const IDENTITY: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

impl ModelConfig {
    pub fn new(m: [[f64; 3]; 3], projection: Projection) -> Result<Self> {
        if m.iter().flatten().any(|x| !x.is_finite()) {
            return Err(LabError::InvalidArgument("matrix M has non-finite entries".into()));
        }
        Ok(Self {
            m,
            projection,
            zero_mode_rule: ZeroModeRule::Identity,
        })
    }

    /// Incompressible Navier–Stokes: `M = I`, Leray projection.
    pub fn navier_stokes() -> Self {
        Self {
            m: IDENTITY,
            projection: Projection::Leray,
            zero_mode_rule: ZeroModeRule::Identity,
        }
    }

    /// Vector Burgers: `M = I`, no projection.
    pub fn burgers() -> Self {
        Self {
            m: IDENTITY,
            projection: Projection::Identity,
            zero_mode_rule: ZeroModeRule::Identity,
        }
    }

    /// Pure heat flow: `M = 0`.
    pub fn heat_only() -> Self {
        Self {
            m: [[0.0; 3]; 3],
            projection: Projection::Leray,
            zero_mode_rule: ZeroModeRule::Identity,
        }
    }

    pub fn is_linear(&self) -> bool {
        self.m.iter().flatten().all(|&x| x == 0.0)
    }

    /// Scale `M` by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.m.iter_mut().flatten().for_each(|x| *x *= s);
        out
    }

    /// Flag bits stored in snapshot headers: bit 0 set for Leray projection,
    /// bit 1 set when the zero mode is annihilated.
    pub fn flags(&self) -> u32 {
        let mut f = 0;
        if self.projection == Projection::Leray {
            f |= 1;
        }
        if self.zero_mode_rule == ZeroModeRule::Annihilate {
            f |= 2;
        }
        f
    }

    pub fn from_flags(m: [[f64; 3]; 3], flags: u32) -> Self {
        Self {
            m,
            projection: if flags & 1 != 0 { Projection::Leray } else { Projection::Identity },
            zero_mode_rule: if flags & 2 != 0 {
                ZeroModeRule::Annihilate
            } else {
                ZeroModeRule::Identity
            },
        }
    }
}

/// `P(Mu·∇)v`, evaluated pseudospectrally with the grid's dealiasing mask.
pub fn nonlinear_term(u: &SpectralField, v: &SpectralField, cfg: &ModelConfig) -> Result<SpectralField> {
    if u.grid() != v.grid() {
        return Err(LabError::GridMismatch);
    }
    let g = u.grid().clone();
    if cfg.is_linear() {
        return Ok(SpectralField::zeros(&g).with_time(u.time()));
    }
    let len = g.len();
    let uc = u.components();
    let mu: Vec<Vec<Complex64>> = (0..3)
        .map(|i| {
            let row = cfg.m[i];
            (0..len)
                .into_par_iter()
                .map(|idx| uc[0][idx] * row[0] + uc[1][idx] * row[1] + uc[2][idx] * row[2])
                .collect()
        })
        .collect();
    let (w0, w1) = synthesize_pair(&g, &mu[0], Some(&mu[1]));
    let (w2, _) = synthesize_pair(&g, &mu[2], None);
    let w = [w0, w1.expect("paired"), w2];

    let mut out = [vec![0.0; len], vec![0.0; len], vec![0.0; len]];
    let kvec = g.wavevectors();
    let vc = v.components();
    // Nine derivative fields ∂_a v_c, packed two per complex transform as
    // ∂v_first + i ∂v_second and accumulated straight from the buffer.
    let pairs: Vec<(usize, usize)> = (0..3).flat_map(|c| (0..3).map(move |a| (c, a))).collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for chunk in pairs.chunks(2) {
        let (c0, a0) = chunk[0];
        match chunk.get(1) {
            Some(&(c1, a1)) => buf.par_iter_mut().enumerate().for_each(|(idx, b)| {
                let k = kvec[idx];
                let d0 = vc[c0][idx] * Complex64::new(0.0, k[a0]);
                let d1 = vc[c1][idx] * Complex64::new(0.0, k[a1]);
                *b = d0 + Complex64::new(-d1.im, d1.re);
            }),
            None => buf.par_iter_mut().enumerate().for_each(|(idx, b)| {
                *b = vc[c0][idx] * Complex64::new(0.0, kvec[idx][a0]);
            }),
        }
        g.fft().inverse(&mut buf);
        match chunk.get(1) {
            Some(&(c1, a1)) if c1 == c0 => out[c0]
                .par_iter_mut()
                .zip(buf.par_iter())
                .enumerate()
                .for_each(|(i, (o, b))| *o += w[a0][i] * b.re + w[a1][i] * b.im),
            Some(&(c1, a1)) => {
                let (lo, hi) = out.split_at_mut(c1);
                lo[c0]
                    .par_iter_mut()
                    .zip(hi[0].par_iter_mut())
                    .zip(buf.par_iter())
                    .enumerate()
                    .for_each(|(i, ((o0, o1), b))| {
                        *o0 += w[a0][i] * b.re;
                        *o1 += w[a1][i] * b.im;
                    });
            }
            None => out[c0]
                .par_iter_mut()
                .zip(buf.par_iter())
                .enumerate()
                .for_each(|(i, (o, b))| *o += w[a0][i] * b.re),
        }
    }

    let (n0, n1) = analyze_pair(&g, &out[0], Some(&out[1]));
    let (n2, _) = analyze_pair(&g, &out[2], None);
    let raw = SpectralField::from_coeffs(&g, [n0, n1.expect("paired"), n2], u.time())?;
    Ok(match cfg.projection {
        Projection::Leray => leray_project_with(&raw, cfg.zero_mode_rule),
        Projection::Identity => raw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::build_grid;

    #[test]
    fn constant_advection_of_single_mode() {
        let g = build_grid(8, 2.0 * std::f64::consts::PI, 2.0 / 3.0).unwrap();
        let c = [0.3, -0.7, 1.1];
        let mut u = SpectralField::zeros(&g);
        u.set_coeff(0, [Complex64::new(c[0], 0.0), Complex64::new(c[1], 0.0), Complex64::new(c[2], 0.0)]);
        let k0 = [1i64, 2, 0];
        let vk = [Complex64::new(0.2, 0.1), Complex64::new(-0.4, 0.3), Complex64::new(0.5, -0.2)];
        let mut v = SpectralField::zeros(&g);
        let ip = g.index_of_mode(k0);
        let im = g.index_of_mode([-k0[0], -k0[1], -k0[2]]);
        v.set_coeff(ip, vk);
        v.set_coeff(im, [vk[0].conj(), vk[1].conj(), vk[2].conj()]);
        let cfg = ModelConfig::navier_stokes();
        let out = nonlinear_term(&u, &v, &cfg).unwrap();
        let k = g.wavevector(ip);
        let dir = c[0] * k[0] + c[1] * k[1] + c[2] * k[2];
        let expect = crate::spectral::leray::project_mode(k, vk.map(|x| x * Complex64::new(0.0, dir)));
        let got = out.coeff(ip);
        for d in 0..3 {
            assert!((got[d] - expect[d]).norm() < 1e-14);
        }
        let others: f64 = (0..g.len())
            .filter(|&i| i != ip && i != im)
            .map(|i| out.coeff(i).iter().map(|z| z.norm()).sum::<f64>())
            .sum();
        assert!(others < 1e-13);
    }

    #[test]
    fn linear_model_returns_zero() {
        let g = build_grid(4, 1.0, 1.0).unwrap();
        let mut u = SpectralField::zeros(&g);
        u.set_coeff(1, [Complex64::new(1.0, 0.0); 3]);
        let out = nonlinear_term(&u, &u, &ModelConfig::heat_only()).unwrap();
        assert_eq!(out.max_abs_coeff(), 0.0);
    }
}
