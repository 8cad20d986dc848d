use gevrey_lab::diagnostics::{estimate_radius, norm_series_fields, Quantity};
use gevrey_lab::lab::verify::{
    multiplier_constant, plancherel_gap, product_ratio, projection_properties, semigroup_defect,
};
use gevrey_lab::lab::{decode_snapshot, encode_snapshot, Scenario};
use gevrey_lab::spectral::{
    apply_bounded, build_grid, l2, ModelConfig, MultiplierSpec, Projection, RandomFieldSpec, WavenumberGrid,
    ZeroModeRule,
};
use proptest::prelude::*;
use std::path::Path;
use std::sync::OnceLock;

fn grid_strategy() -> impl Strategy<Value = WavenumberGrid> {
    (prop::sample::select(vec![8usize, 12, 16]), 0.5f64..12.0).prop_map(|(n, l)| build_grid(n, l, 2.0 / 3.0).unwrap())
}

fn constants() -> &'static [f64; 3] {
    static C: OnceLock<[f64; 3]> = OnceLock::new();
    C.get_or_init(|| [0.0, 0.75, 1.25].map(multiplier_constant))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn leray_is_idempotent_and_kills_gradients(g in grid_strategy(), seed in any::<u64>()) {
        let (idem, kill) = projection_properties(&g, seed);
        prop_assert!(idem <= 1e-13, "idempotence defect {idem}");
        prop_assert!(kill <= 1e-13, "gradient residue {kill}");
    }

    #[test]
    fn plancherel_routes_agree(g in grid_strategy(), seed in any::<u64>()) {
        prop_assert!(plancherel_gap(&g, seed) <= 1e-12);
    }

    #[test]
    fn multiplier_families_compose(g in grid_strategy(), seed in any::<u64>(), a in 0.0f64..0.2, b in 0.0f64..0.2, r in -1.0f64..2.0, s in 0.0f64..2.0) {
        prop_assert!(semigroup_defect(&g, seed) <= 1e-14);
        let u = RandomFieldSpec::new(1.0, seed).generate(&g);
        let families = [
            (MultiplierSpec::Heat(a), MultiplierSpec::Heat(b), MultiplierSpec::Heat(a + b)),
            (MultiplierSpec::Gevrey(a), MultiplierSpec::Gevrey(b), MultiplierSpec::Gevrey(a + b)),
            (MultiplierSpec::FracPower(r), MultiplierSpec::FracPower(s), MultiplierSpec::FracPower(r + s)),
        ];
        for (x, y, xy) in families {
            let two = apply_bounded(&apply_bounded(&u, &x), &y);
            let one = apply_bounded(&u, &xy);
            let scale = l2(&one).max(f64::MIN_POSITIVE);
            prop_assert!(l2(&two.sub(&one).unwrap()) <= 1e-14 * scale, "{x:?} {y:?}");
        }
    }

    #[test]
    fn scalar_multiplier_inequality(y in 0.0f64..=50.0, lambda in 0.0f64..=10.0, which in 0usize..3) {
        let alpha = [0.0, 0.75, 1.25][which];
        let c = constants()[which];
        let lhs = alpha * y.ln() + lambda * y - y * y;
        let rhs = c.ln() + alpha * 0.5 * (1.0 + lambda * lambda).ln() + lambda * lambda / 4.0;
        let lhs = if alpha == 0.0 { lambda * y - y * y } else { lhs };
        prop_assert!(lhs <= rhs + 1e-12, "alpha {alpha}: {lhs} > {rhs}");
    }

    #[test]
    fn gevrey_at_zero_weight_is_sobolev(g in grid_strategy(), seed in any::<u64>(), beta in 0.0f64..3.0) {
        let f = RandomFieldSpec::new(beta, seed).with_mean().generate(&g);
        let s = norm_series_fields(&[f], &[0.0, 0.5, 1.25, 2.0], &[0.0], false).unwrap();
        for i in 0..4 {
            prop_assert_eq!(s.column(Quantity::J(i)), s.column(Quantity::G(i, 0)));
        }
    }

    #[test]
    fn radius_estimate_ignores_amplitude(seed in any::<u64>(), decay in 0.3f64..1.5, c in -6.0f64..6.0) {
        let g = build_grid(16, 2.0 * std::f64::consts::PI, 1.0).unwrap();
        let grid = g.clone();
        let f = RandomFieldSpec::new(0.0, seed).generate(&g).scale_modes(|i| (-decay * grid.k_norm(i)).exp());
        let a = estimate_radius(&f);
        let b = estimate_radius(&f.scaled(10f64.powf(c)));
        prop_assert!((a.slope - b.slope).abs() <= 1e-12 * a.slope.abs().max(1.0));
        prop_assert_eq!(a.reliable, b.reliable);
    }

    #[test]
    fn product_ratio_is_finite(seed in 0u64..1_000_000, which in 0usize..3) {
        let g = build_grid(16, 2.0 * std::f64::consts::PI, 2.0 / 3.0).unwrap();
        let r = [0.6, 0.75, 1.0][which];
        let v = product_ratio(&g, r, seed, 3.0);
        prop_assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn snapshots_round_trip_bit_exact(g in grid_strategy(), seed in any::<u64>(), t in -1e3f64..1e3, flags in 0u32..4) {
        let f = RandomFieldSpec::new(1.0, seed).with_mean().generate(&g).with_time(t);
        let m = [[seed as f64 * 1e-19, -1.5, 0.0], [0.25, 1.0, 3.0], [1e-300, -0.0, 7.0]];
        let cfg = ModelConfig::from_flags(m, flags);
        let bytes = encode_snapshot(&f, &cfg);
        let (back, h) = decode_snapshot(&bytes).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(h.model(), cfg);
    }

    #[test]
    fn scenario_text_round_trips(
        n in (2usize..64).prop_map(|k| 2 * k),
        l in 0.1f64..100.0,
        dt in 1e-5f64..1e-2,
        span in 0.5f64..20.0,
        seed in any::<u64>(),
        proj in any::<bool>(),
        annihilate in any::<bool>(),
        m in prop::array::uniform9(-3.0f64..3.0),
        lambdas in prop::collection::vec(0.0f64..2.0, 0..4),
    ) {
        let mut text = format!(
            "name = p\nseed = {seed}\n[model]\nkind = custom\nm = {}\nprojection = {}\nzero_mode = {}\n[grid]\nn = {n}\nbox_length = {l}\n[time]\nt_end = {span}\ndt = {dt}\n[initial]\nkind = taylor-green\n",
            m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "),
            if proj { "leray" } else { "identity" },
            if annihilate { "annihilate" } else { "identity" },
        );
        if !lambdas.is_empty() {
            text.push_str(&format!(
                "[diagnostics]\nlambda_list = {}\n",
                lambdas.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            ));
        }
        let a = Scenario::parse_str(&text, Path::new(".")).unwrap();
        prop_assert_eq!(a.model.projection, if proj { Projection::Leray } else { Projection::Identity });
        prop_assert_eq!(a.model.zero_mode, if annihilate { ZeroModeRule::Annihilate } else { ZeroModeRule::Identity });
        let once = a.to_config_string();
        let b = Scenario::parse_str(&once, Path::new(".")).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(once, b.to_config_string());
    }
}

#[test]
fn product_constant_settles_under_sample_doubling() {
    let g = build_grid(16, 2.0 * std::f64::consts::PI, 2.0 / 3.0).unwrap();
    for r in [0.6, 0.75, 1.0] {
        let (c200, c400) = gevrey_lab::lab::verify::product_constant(&g, r, 200, 3.0);
        assert!(c200 > 0.0 && c400.is_finite());
        assert!(c400 >= c200);
        assert!(c400 / c200 - 1.0 <= 0.1, "r = {r}: {c200} -> {c400}");
    }
}
