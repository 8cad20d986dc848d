use super::field::SpectralField;
use crate::error::{LabError, Result};

/// Largest admissible exponent `θ·|k|` in a Gevrey factor.
pub const GEVREY_EXPONENT_CAP: f64 = 600.0;
/// Machine-noise floor relative to the field norm.
const NOISE_FLOOR: f64 = 1e-16;
/// Amplified noise may not exceed this fraction of the weighted norm.
const NOISE_TOLERANCE: f64 = 1e-3;

/// Radial Fourier multiplier `m(|k|)`.
#[derive(Debug, Clone, PartialEq)]
pub enum MultiplierSpec {
    /// `|k|^r`; the zero mode maps to 0 unless `r = 0`.
    FracPower(f64),
    /// `(1 + |k|²)^{r/2}`.
    InhomFracPower(f64),
    /// `e^{-t|k|²}`.
    Heat(f64),
    /// `e^{θ|k|}`.
    Gevrey(f64),
    Composite(Vec<MultiplierSpec>),
}

impl MultiplierSpec {
    pub fn identity() -> Self {
        MultiplierSpec::Composite(Vec::new())
    }

    /// Natural log of `m(ρ)`; `-∞` where the multiplier vanishes.
    pub fn log_value(&self, rho: f64) -> f64 {
        match self {
            MultiplierSpec::FracPower(r) => {
                if *r == 0.0 {
                    0.0
                } else if rho == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    r * rho.ln()
                }
            }
            MultiplierSpec::InhomFracPower(r) => 0.5 * r * (rho * rho).ln_1p(),
            MultiplierSpec::Heat(t) => -t * rho * rho,
            MultiplierSpec::Gevrey(theta) => theta * rho,
            MultiplierSpec::Composite(list) => list.iter().map(|m| m.log_value(rho)).sum(),
        }
    }

    pub fn value(&self, rho: f64) -> f64 {
        match self {
            MultiplierSpec::FracPower(r) => {
                if *r == 0.0 {
                    1.0
                } else if rho == 0.0 {
                    0.0
                } else {
                    rho.powf(*r)
                }
            }
            MultiplierSpec::InhomFracPower(r) => (1.0 + rho * rho).powf(0.5 * r),
            MultiplierSpec::Heat(t) => (-t * rho * rho).exp(),
            MultiplierSpec::Gevrey(theta) => (theta * rho).exp(),
            MultiplierSpec::Composite(list) => list.iter().map(|m| m.value(rho)).product(),
        }
    }

    /// Total Gevrey exponent `θ` carried by this multiplier.
    pub fn gevrey_theta(&self) -> f64 {
        match self {
            MultiplierSpec::Gevrey(theta) => *theta,
            MultiplierSpec::Composite(list) => list.iter().map(|m| m.gevrey_theta()).sum(),
            _ => 0.0,
        }
    }

    /// Copy with every Gevrey exponent replaced so the total equals `theta`.
    fn with_gevrey(&self, theta: f64) -> Self {
        let mut parts = vec![self.without_gevrey()];
        parts.push(MultiplierSpec::Gevrey(theta));
        MultiplierSpec::Composite(parts)
    }

    fn without_gevrey(&self) -> Self {
        match self {
            MultiplierSpec::Gevrey(_) => MultiplierSpec::identity(),
            MultiplierSpec::Composite(list) => {
                MultiplierSpec::Composite(list.iter().map(|m| m.without_gevrey()).collect())
            }
            other => other.clone(),
        }
    }
}

/// Unchecked coefficient-wise product.
fn multiply(f: &SpectralField, m: &MultiplierSpec) -> SpectralField {
    let g = f.grid().clone();
    f.scale_modes(|i| m.value(g.k_norm(i)))
}

fn plain_sq_sum(f: &SpectralField, m: &MultiplierSpec) -> f64 {
    let g = f.grid();
    let ret = g.retained();
    crate::sum::det_sum_by(ret.len(), |r| {
        let i = ret[r];
        let w = m.value(g.k_norm(i));
        if w == 0.0 {
            return 0.0;
        }
        let v = f.coeff(i);
        w * w * (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr())
    })
}

/// Largest `θ` accepted by the guard for this field and base multiplier.
fn admissible_theta(f: &SpectralField, m: &MultiplierSpec) -> f64 {
    let kmax = f.grid().k_max();
    let cap = if kmax > 0.0 { GEVREY_EXPONENT_CAP / kmax } else { f64::INFINITY };
    if passes_noise_test(f, &m.with_gevrey(cap)) {
        return cap;
    }
    let (mut lo, mut hi) = (0.0, cap);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if passes_noise_test(f, &m.with_gevrey(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn passes_noise_test(f: &SpectralField, m: &MultiplierSpec) -> bool {
    let g = f.grid();
    let unweighted = plain_sq_sum(f, &MultiplierSpec::identity()).sqrt();
    if unweighted == 0.0 {
        return true;
    }
    let weighted = plain_sq_sum(f, m).sqrt();
    let max_factor = g
        .retained()
        .iter()
        .map(|&i| m.value(g.k_norm(i)))
        .fold(0.0, f64::max);
    max_factor.is_finite() && max_factor * NOISE_FLOOR * unweighted <= NOISE_TOLERANCE * weighted
}

/// Check the Gevrey overflow guard; returns the admissible θ on failure.
pub fn check_guard(f: &SpectralField, m: &MultiplierSpec) -> Result<()> {
    let theta = m.gevrey_theta();
    if theta <= 0.0 {
        return Ok(());
    }
    let kmax = f.grid().k_max();
    if theta * kmax > GEVREY_EXPONENT_CAP || !passes_noise_test(f, m) {
        return Err(LabError::UnreliableWeight {
            theta,
            theta_max: admissible_theta(f, &m.without_gevrey()),
        });
    }
    Ok(())
}

/// Coefficient-wise product `m(|k|)·û(k)` after the overflow guard.
pub fn apply_multiplier(f: &SpectralField, m: &MultiplierSpec) -> Result<SpectralField> {
    check_guard(f, m)?;
    Ok(multiply(f, m))
}

/// Product without the guard, for multipliers known to be bounded.
pub fn apply_bounded(f: &SpectralField, m: &MultiplierSpec) -> SpectralField {
    multiply(f, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::build_grid;
    use num_complex::Complex64;

    fn single_mode(m: [i64; 3], a: f64) -> SpectralField {
        let g = build_grid(8, 2.0 * std::f64::consts::PI, 2.0 / 3.0).unwrap();
        let mut f = SpectralField::zeros(&g);
        let z = Complex64::new(0.0, 0.0);
        f.set_coeff(g.index_of_mode(m), [Complex64::new(a, 0.0), z, z]);
        f.set_coeff(g.index_of_mode([-m[0], -m[1], -m[2]]), [Complex64::new(a, 0.0), z, z]);
        f
    }

    #[test]
    fn heat_factor_on_mode_two() {
        let f = single_mode([2, 0, 0], 1.0);
        let h = apply_multiplier(&f, &MultiplierSpec::Heat(0.25)).unwrap();
        let i = f.grid().index_of_mode([2, 0, 0]);
        assert!((h.coeff(i)[0].re - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn gevrey_zero_is_identity() {
        let f = single_mode([1, 2, 0], 0.3);
        let h = apply_multiplier(&f, &MultiplierSpec::Gevrey(0.0)).unwrap();
        assert_eq!(h, f);
    }

    #[test]
    fn frac_power_kills_mean_mode() {
        let g = build_grid(4, 1.0, 1.0).unwrap();
        let mut f = SpectralField::zeros(&g);
        f.set_coeff(0, [Complex64::new(1.0, 0.0); 3]);
        let h = apply_multiplier(&f, &MultiplierSpec::FracPower(-0.5)).unwrap();
        assert_eq!(h.coeff(0)[0], Complex64::new(0.0, 0.0));
        let h = apply_multiplier(&f, &MultiplierSpec::FracPower(0.0)).unwrap();
        assert_eq!(h.coeff(0)[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn guard_reports_admissible_theta() {
        let f = single_mode([1, 0, 0], 1.0);
        let kmax = f.grid().k_max();
        let err = apply_multiplier(&f, &MultiplierSpec::Gevrey(700.0 / kmax)).unwrap_err();
        match err {
            LabError::UnreliableWeight { theta_max, .. } => {
                assert!(theta_max > 0.0 && theta_max * kmax <= GEVREY_EXPONENT_CAP + 1e-9)
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
