//! Invariants that must hold for arbitrary inputs.

use approx::assert_relative_eq;
use proptest::prelude::*;

use ricci_umbilic::harness::{parse_config, serialize_config, HarnessConfig};
use ricci_umbilic::identities::identity_residuals;
use ricci_umbilic::pinching::{f_delta, f_ratio, h_diagonal_max, h_sign};
use ricci_umbilic::{
    apply_boundary_conditions, curvature, rescale, step, BoundaryState, CurvatureField, Preset,
};

fn field(pairs: &[(f64, f64)]) -> CurvatureField {
    let (a, b) = pairs.iter().copied().unzip();
    CurvatureField::from_eigenvalues(a, b)
}

fn positive_pairs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((1e-2..1e2_f64, 1e-2..1e2_f64), 1..20)
}

fn preset() -> impl Strategy<Value = Preset> {
    prop_oneof![
        (0.6..std::f64::consts::FRAC_PI_2).prop_map(|s_max| Preset::RoundCap { s_max }),
        (0.8..1.5_f64, -0.25..0.25_f64, 2..5_u32)
            .prop_map(|(s_max, amp, mode)| { Preset::PerturbedCap { s_max, amp, mode } }),
        (0.6..1.2_f64, 0.8..1.4_f64)
            .prop_map(|(s_max, aspect)| Preset::FlattenedCap { s_max, aspect }),
        (0.2..5.0_f64).prop_map(|radius| Preset::FlatBall { radius }),
    ]
}

proptest! {
    #[test]
    fn identity_residuals_are_linearly_related(
        a in -50.0..50.0_f64,
        b in -50.0..50.0_f64,
        kappa in 0.0..5.0_f64,
        a_s in -100.0..100.0_f64,
        b_s in -100.0..100.0_f64,
    ) {
        let r = identity_residuals(&BoundaryState::new(a, b, kappa, a_s, b_s));
        let tol = 1e-12 * (1.0 + r.i1.abs() + r.i2.abs());
        prop_assert!((r.i3 - (r.i1 + 2.0 * r.i2)).abs() <= tol);
    }

    #[test]
    fn f_ratio_lies_between_one_third_and_one(pairs in positive_pairs()) {
        let (f, _) = f_ratio(&field(&pairs)).unwrap();
        prop_assert!((1.0 / 3.0 - 1e-15..1.0).contains(&f));
        let spread = pairs
            .iter()
            .map(|(a, b)| (a - b).abs() / a.max(*b))
            .fold(0.0, f64::max);
        if spread > 1e-3 {
            prop_assert!(f > 1.0 / 3.0 + 1e-8);
        }
    }

    #[test]
    fn f_ratio_of_isotropic_field_is_one_third(values in prop::collection::vec(1e-3..1e3_f64, 1..20)) {
        let pairs: Vec<(f64, f64)> = values.iter().map(|v| (*v, *v)).collect();
        let (f, _) = f_ratio(&field(&pairs)).unwrap();
        assert_relative_eq!(f, 1.0 / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn f_delta_at_zero_gap_is_f_minus_one_third(pairs in positive_pairs()) {
        let curv = field(&pairs);
        let (f, at) = f_ratio(&curv).unwrap();
        let (g, at_g) = f_delta(&curv, 0.0).unwrap();
        prop_assert!((g - (f - 1.0 / 3.0)).abs() < 1e-14);
        prop_assert_eq!(at, at_g);
    }

    #[test]
    fn h_on_the_diagonal_matches_the_cubic(eps in 0.0..10.0_f64) {
        let h = h_sign(eps / 2.0, eps / 2.0);
        let cubic = -eps.powi(3) + 3.0 * eps * eps - eps - 2.0;
        prop_assert!((h - cubic).abs() <= 1e-12 * (1.0 + cubic.abs()));
        prop_assert!((h_diagonal_max(eps) - cubic).abs() <= 1e-12 * (1.0 + cubic.abs()));
    }

    #[test]
    fn curvature_scales_inversely_with_area(preset in preset(), c in 0.1..10.0_f64) {
        let Ok(m) = preset.build(48) else {
            return Err(TestCaseError::reject("preset rejected"));
        };
        let base = curvature(&m).unwrap();
        let scaled = curvature(&rescale(&m, c).unwrap()).unwrap();
        let size = base.max_abs().max(1.0);
        for (x, y) in base.a.iter().zip(&scaled.a).chain(base.b.iter().zip(&scaled.b)) {
            prop_assert!((x / (c * c) - y).abs() <= 1e-8 * size / (c * c));
        }
    }

    #[test]
    fn presets_satisfy_the_boundary_condition(preset in preset(), n in 16..200_usize) {
        let Ok(m) = preset.build(n) else {
            return Err(TestCaseError::reject("preset rejected"));
        };
        prop_assert!(m.boundary_residual() <= 1e-12);
        prop_assert!(apply_boundary_conditions(&m).boundary_residual() <= 1e-12);
        if preset.requires_positive_ricci() {
            let curv = curvature(&m).unwrap();
            prop_assert!(curv.a.iter().chain(&curv.b).all(|v| *v > 0.0));
        }
    }

    #[test]
    fn a_step_keeps_the_boundary_condition(preset in preset()) {
        let Ok(m) = preset.build(32) else {
            return Err(TestCaseError::reject("preset rejected"));
        };
        let curv = curvature(&m).unwrap();
        let dt = ricci_umbilic::cfl_dt(&m, &curv, 0.25);
        let next = step(&m, dt).unwrap();
        prop_assert!(next.boundary_residual() <= 1e-10);
        prop_assert_eq!(next.kappa(), m.kappa());
        prop_assert!(next.time() == dt);
    }

    #[test]
    fn config_survives_serialization(
        preset in preset(),
        n_cells in 8..4096_usize,
        cfl in 0.01..0.5_f64,
        t_end in prop::option::of(1e-3..1.0_f64),
        r_stop in 10.0..1e5_f64,
        record_every in 1..100_usize,
        delta in prop::option::of(0.0..0.5_f64),
        epsilon in prop::option::of(0.0..0.3_f64),
        thetas in prop::collection::vec(0.01..0.99_f64, 1..4),
        flags in prop::array::uniform5(any::<bool>()),
    ) {
        let mut cfg = HarnessConfig::new(preset);
        cfg.flow.n_cells = n_cells;
        cfg.flow.cfl_factor = cfl;
        cfg.flow.t_end = t_end;
        cfg.flow.r_stop = r_stop;
        cfg.flow.record_every = record_every;
        cfg.flow.delta = delta;
        cfg.epsilon = epsilon;
        cfg.thetas = thetas;
        [
            cfg.emit_csv,
            cfg.emit_json,
            cfg.emit_plots,
            cfg.monitor_identities,
            cfg.monitor_normalized,
        ] = flags;
        prop_assert_eq!(parse_config(&serialize_config(&cfg)).unwrap(), cfg);
    }
}
