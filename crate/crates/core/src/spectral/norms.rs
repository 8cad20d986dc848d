use super::field::SpectralField;
use super::multiplier::{check_guard, MultiplierSpec};
use crate::error::Result;
use crate::sum::det_sum_by;

/// `L³ Σ_k |m(|k|) û(k)|²` without the overflow guard.
pub fn norm_sq_unchecked(f: &SpectralField, m: &MultiplierSpec) -> f64 {
    let g = f.grid();
    let ret = g.retained();
    let s = det_sum_by(ret.len(), |r| {
        let i = ret[r];
        let lw = m.log_value(g.k_norm(i));
        if lw == f64::NEG_INFINITY {
            return 0.0;
        }
        let v = f.coeff(i);
        let a = v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr();
        if a == 0.0 { 0.0 } else { a * (2.0 * lw).exp() }
    });
    g.volume() * s
}

/// `‖m(A) u‖_{L²}` with the Gevrey overflow guard.
pub fn norm_l2(f: &SpectralField, m: &MultiplierSpec) -> Result<f64> {
    check_guard(f, m)?;
    Ok(norm_sq_unchecked(f, m).sqrt())
}

/// Plain `‖u‖_{L²}`.
pub fn l2(f: &SpectralField) -> f64 {
    norm_sq_unchecked(f, &MultiplierSpec::identity()).sqrt()
}

/// `‖u‖_{L²}` by the rectangle rule on physical samples.
pub fn physical_l2(f: &SpectralField) -> f64 {
    let g = f.grid();
    let samples = f.to_physical();
    let s = det_sum_by(g.len(), |i| samples.iter().map(|c| c[i] * c[i]).sum::<f64>());
    (s * g.volume() / g.len() as f64).sqrt()
}

/// Dyadic shell values `2^{q/2} (L³ Σ_{2^q ≤ |k| < 2^{q+1}} |û|²)^{1/2}` for
/// every shell meeting the retained set, in increasing `q`.
pub fn besov_shell_norm(f: &SpectralField) -> Vec<(i32, f64)> {
    let g = f.grid();
    let base = g.base_wavenumber();
    let q_min = base.log2().floor() as i32;
    let q_max = g.k_max().log2().floor() as i32;
    let mut mass = vec![0.0; (q_max - q_min + 1).max(0) as usize];
    let mut comp = vec![0.0; mass.len()];
    for &i in g.retained() {
        let k = g.k_norm(i);
        if k == 0.0 {
            continue;
        }
        let q = k.log2().floor() as i32;
        // |k| sitting exactly on 2^q can round below it in log2
        let q = if 2f64.powi(q + 1) <= k { q + 1 } else { q };
        let slot = (q - q_min) as usize;
        let v = f.coeff(i);
        let y = v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr() - comp[slot];
        let t = mass[slot] + y;
        comp[slot] = (t - mass[slot]) - y;
        mass[slot] = t;
    }
    mass.iter()
        .enumerate()
        .map(|(s, &m)| {
            let q = q_min + s as i32;
            (q, 2f64.powf(0.5 * q as f64) * (g.volume() * m).sqrt())
        })
        .collect()
}
