use gevrey_lab::mild::{duhamel_all, duhamel_bilinear, march, MarchOptions, NoHook, TrajectoryGrid};
use gevrey_lab::spectral::{
    apply_bounded, build_grid, l2, nonlinear_term, project_mode, ModelConfig, MultiplierSpec, Projection,
    RandomFieldSpec, SpectralField, WavenumberGrid,
};
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Direct triadic sum `Σ_{p+q=k} Σ_a (Mû(p))_a i q_a v̂(q)` over retained modes.
fn brute_force(u: &SpectralField, v: &SpectralField, cfg: &ModelConfig) -> SpectralField {
    let g = u.grid();
    let ret = g.retained();
    let cut = g.cutoff();
    let mut out = SpectralField::zeros(g);
    for &ki in ret {
        let k = g.mode(ki);
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        for &pi in ret {
            let p = g.mode(pi);
            let q = [k[0] - p[0], k[1] - p[1], k[2] - p[2]];
            if q.iter().any(|x| x.abs() > cut) {
                continue;
            }
            let qi = g.index_of_mode(q);
            let up = u.coeff(pi);
            let vq = v.coeff(qi);
            let qv = g.wavevector(qi);
            let mu: [Complex64; 3] = std::array::from_fn(|a| (0..3).map(|b| up[b] * cfg.m[a][b]).sum());
            let adv: Complex64 = (0..3).map(|a| mu[a] * I * qv[a]).sum();
            for c in 0..3 {
                acc[c] += adv * vq[c];
            }
        }
        let acc = match cfg.projection {
            Projection::Leray => project_mode(g.wavevector(ki), acc),
            Projection::Identity => acc,
        };
        out.set_coeff(ki, acc);
    }
    out
}

fn odd_box() -> WavenumberGrid {
    build_grid(8, 3.7, 2.0 / 3.0).unwrap()
}

#[test]
fn nonlinear_term_matches_direct_convolution() {
    let g = odd_box();
    let m = [[0.4, -1.2, 0.0], [0.7, 1.0, 0.3], [-0.5, 0.2, 2.0]];
    let configs = [
        ModelConfig::navier_stokes(),
        ModelConfig::burgers(),
        ModelConfig::new(m, Projection::Identity).unwrap(),
        ModelConfig::new(m, Projection::Leray).unwrap(),
    ];
    for (s, cfg) in configs.iter().enumerate() {
        let u = RandomFieldSpec::new(0.5, 11 + s as u64).with_mean().generate(&g);
        let v = RandomFieldSpec::new(1.0, 101 + s as u64).with_mean().generate(&g);
        let fast = nonlinear_term(&u, &v, cfg).unwrap();
        let slow = brute_force(&u, &v, cfg);
        let err = l2(&fast.sub(&slow).unwrap()) / l2(&slow);
        assert!(err < 1e-12, "config {s}: relative error {err}");
    }
}

#[test]
fn constant_drift_duhamel_has_closed_form() {
    let g = odd_box();
    let big_u = [0.8, -0.3, 1.1];
    let mut u = SpectralField::zeros(&g);
    u.set_coeff(0, big_u.map(|x| Complex64::new(x, 0.0)));

    let mode = [1, -2, 1];
    let amp = [Complex64::new(0.3, -0.4), Complex64::new(-0.1, 0.2), Complex64::new(0.5, 0.05)];
    let (ki, kc) = (g.index_of_mode(mode), g.index_of_mode(mode.map(|x| -x)));
    let mut v = SpectralField::zeros(&g);
    v.set_coeff(ki, amp);
    v.set_coeff(kc, amp.map(|a| a.conj()));

    let (t0, t1) = (0.2, 0.9);
    let nodes = vec![0.45, 0.7, t1];
    let traj = |f: &SpectralField| TrajectoryGrid::new(t0, f.clone(), nodes.clone(), vec![f.clone(); 3]).unwrap();
    let cfg = ModelConfig::burgers();
    let got = duhamel_all(&traj(&u), &traj(&v), &cfg).unwrap();
    let mid = duhamel_bilinear(&traj(&u), &traj(&v), &cfg, 0.55).unwrap();

    let expect = |t: f64| {
        let mut e = SpectralField::zeros(&g);
        for (idx, a) in [(ki, amp), (kc, amp.map(|a| a.conj()))] {
            let k = g.wavevector(idx);
            let k2 = k.iter().map(|x| x * x).sum::<f64>();
            let drift: f64 = (0..3).map(|c| big_u[c] * k[c]).sum();
            let factor = -(1.0 - (-(t - t0) * k2).exp()) / k2 * I * drift;
            e.set_coeff(idx, a.map(|x| factor * x));
        }
        e
    };
    for (f, &t) in got.iter().zip(&nodes) {
        let e = expect(t);
        assert!(l2(&f.sub(&e).unwrap()) <= 1e-13 * l2(&e), "t = {t}");
    }
    let e = expect(0.55);
    assert!(l2(&mid.sub(&e).unwrap()) <= 1e-13 * l2(&e));
}

#[test]
fn heat_only_march_is_the_heat_multiplier() {
    let g = build_grid(16, 5.0, 2.0 / 3.0).unwrap();
    let u0 = RandomFieldSpec::new(0.0, 4).with_mean().generate(&g);
    let opts = MarchOptions::new(0.3, 1.3, 0.07).with_outputs(vec![0.5, 1.3]);
    let traj = march(&u0, &opts, &ModelConfig::heat_only(), &mut NoHook).unwrap();
    for (f, &t) in traj.fields().iter().zip(traj.nodes()) {
        let e = apply_bounded(&u0, &MultiplierSpec::Heat(t - 0.3));
        assert!(l2(&f.sub(&e).unwrap()) <= 1e-13 * l2(&e), "t = {t}");
        assert_eq!(f.time(), t);
    }
}

#[test]
fn march_preserves_reality_and_solenoidality() {
    let g = build_grid(16, 2.0 * std::f64::consts::PI, 2.0 / 3.0).unwrap();
    let u0 = gevrey_lab::spectral::leray_project(&RandomFieldSpec::new(1.0, 9).generate(&g));
    let opts = MarchOptions::new(0.0, 0.2, 0.01);
    let traj = march(&u0, &opts, &ModelConfig::navier_stokes(), &mut NoHook).unwrap();
    let end = traj.field(traj.len() - 1);
    assert!(end.is_finite());
    assert!(end.hermitian_defect() < 1e-14);
    assert!(end.divergence_ratio() < 1e-13);
    assert!(l2(end) < l2(&u0));
}
