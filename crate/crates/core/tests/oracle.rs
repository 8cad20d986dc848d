use gevrey_lab::oracle::*;
use gevrey_lab::quad::gauss_kronrod;

/// `H = ĝ'(ρ)/ρ` where `ĝ(ρ) = √(2/π) ρ⁻¹ ∫ g(r) r sin(ρr) dr` is the radial
/// transform of the profile `g` with `u = g(|x|) x`.
fn h_by_radial_quadrature(t: f64, rho: f64) -> f64 {
    let p = ExampleParams::default();
    let s = t + 1.0;
    let r_max = (4.0 * s * 60.0).sqrt();
    let g = |r: f64| if r == 0.0 { radial_profile(t, 1e-300, &p).unwrap() } else { radial_profile(t, r, &p).unwrap() };
    let sin_part = gauss_kronrod(|r| g(r) * r * (rho * r).sin(), 0.0, r_max, 1e-14, 0.0).value;
    let cos_part = gauss_kronrod(|r| g(r) * r * r * (rho * r).cos(), 0.0, r_max, 1e-14, 0.0).value;
    let c = (2.0 / std::f64::consts::PI).sqrt();
    c * (-sin_part / (rho * rho) + cos_part / rho) / rho
}

#[test]
fn series_matches_radial_quadrature() {
    let p = ExampleParams::default();
    for &(t, rho) in &[(1.0, 1.0), (1.0, 0.3), (1.0, 2.5), (0.5, 1.5), (4.0, 0.8)] {
        let series = spectrum_series(t, 10.0, &p).unwrap().h(rho);
        let quad = h_by_radial_quadrature(t, rho);
        assert!((series / quad - 1.0).abs() < 1e-10, "t={t} rho={rho}: {series} vs {quad}");
    }
}

#[test]
fn plancherel_against_physical_radial_integral() {
    let p = ExampleParams::default();
    for &t in &[0.5, 1.0, 5.0] {
        let spectral = gevrey_norm_sq(t, 0.0, 0.0, &p).unwrap();
        let s = t + 1.0;
        let r_max = (4.0 * s * 60.0).sqrt();
        let physical = 4.0
            * std::f64::consts::PI
            * gauss_kronrod(
                |r| {
                    let g = radial_profile(t, r.max(1e-300), &p).unwrap();
                    r.powi(4) * g * g
                },
                0.0,
                r_max,
                1e-13,
                0.0,
            )
            .value;
        assert!((spectral / physical - 1.0).abs() < 1e-8, "t={t}: {spectral} vs {physical}");
    }
}

#[test]
fn initial_energy_uses_coulomb_tail() {
    // ‖u₀‖² = 4π∫ r⁴ g₀² dr with g₀ = -φ₀ near r=0 behaving like -4/r²
    let p = ExampleParams::default();
    let spectral = gevrey_norm_sq(0.0, 0.0, 0.0, &p).unwrap();
    let physical = 4.0
        * std::f64::consts::PI
        * gauss_kronrod(
            |r| {
                let g = radial_profile(0.0, r.max(1e-12), &p).unwrap();
                r.powi(4) * g * g
            },
            0.0,
            40.0,
            1e-13,
            0.0,
        )
        .value;
    assert!((spectral / physical - 1.0).abs() < 1e-8, "{spectral} vs {physical}");
}

#[test]
fn burgers_and_hopf_cole_residuals_vanish() {
    use rand::{Rng, SeedableRng};
    let p = ExampleParams::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let t = rng.gen_range(0.5..5.0);
        let x = [rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0)];
        let res = burgers_residual(t, x, &p).unwrap();
        assert!(res.iter().all(|r| r.abs() <= 1e-8), "{res:?}");
        assert!(hopf_cole_residual(t, x, &p).unwrap().abs() <= 1e-8);
    }
}

#[test]
fn radius_ratio_tends_to_sqrt_six() {
    let p = ExampleParams::default();
    let t = 1e8;
    let ratio = exact_radius(t, &p).unwrap() / (6.0 * t * t.ln()).sqrt();
    assert!((ratio - 1.0).abs() < 1e-7);
}

#[test]
fn weighted_norm_grows_toward_radius() {
    let p = ExampleParams::default();
    let t = 3.0;
    let rad = exact_radius(t, &p).unwrap();
    let mut prev = 0.0;
    for frac in [0.0, 0.3, 0.6, 0.9, 0.97] {
        let g = gevrey_norm_sq(t, 0.5, frac * rad, &p).unwrap();
        assert!(g > prev);
        prev = g;
    }
}

#[test]
fn time_shift_translates_the_clock() {
    let shifted = ExampleParams::new(2.0).unwrap();
    let a = eval_physical(1.0, [0.3, 0.1, -0.2], &shifted).unwrap();
    let b = eval_physical(3.0, [0.3, 0.1, -0.2], &ExampleParams::default()).unwrap();
    assert_eq!(a, b);
}
