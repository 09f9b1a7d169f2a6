use bloch_core::extremal::{gauge_normalize, lemma_perturbation, rayleigh_objective};
use bloch_core::functionals::{functional_value, weight_reduction_check, FunctionalSpec};
use bloch_core::norm::{coefficient_bound, log_bound_deficit, seminorm_general, seminorm_radial};
use bloch_core::poly::{marty_first_order, mobius_recenter, Coefficients, Mobius};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_poly() -> impl Strategy<Value = Coefficients> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=8)
        .prop_filter("nonzero", |v| {
            v.iter().any(|&(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(|v| {
            Coefficients::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
        })
}

fn nonneg_poly() -> impl Strategy<Value = Coefficients> {
    prop::collection::vec(0.0f64..1.0, 2..=8)
        .prop_filter("nonzero", |v| v.iter().any(|&a| a > 1e-3))
        .prop_map(|v| Coefficients::from_real(&v).unwrap())
}

fn disc_point(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0f64..1.0, 0.0f64..std::f64::consts::TAU)
        .prop_map(move |(r, th)| Complex64::from_polar(radius * r.sqrt(), th))
}

fn nonzero_scalar() -> impl Strategy<Value = Complex64> {
    (0.1f64..5.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, th)| Complex64::from_polar(r, th))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_paths_agree_on_nonnegative_input(f in nonneg_poly()) {
        let radial = seminorm_radial(&f, 1e-10).unwrap().value;
        let general = seminorm_general(&f, 1e-9).unwrap().value;
        prop_assert!((radial - general).abs() <= 1e-8 * radial.max(1.0), "{radial} vs {general}");
    }

    #[test]
    fn norm_is_homogeneous(f in complex_poly(), c in nonzero_scalar()) {
        let a = seminorm_general(&f, 1e-10).unwrap().value;
        let b = seminorm_general(&f.scaled(c), 1e-10).unwrap().value;
        prop_assert!((b - c.norm() * a).abs() <= 1e-9 * b.max(1.0));
    }

    #[test]
    fn norm_is_rotation_invariant(f in complex_poly(), theta in 0.0f64..std::f64::consts::TAU) {
        let rotated: Vec<Complex64> = f
            .as_slice()
            .iter()
            .enumerate()
            .map(|(i, &b)| b * Complex64::from_polar(1.0, (i + 1) as f64 * theta))
            .collect();
        let g = Coefficients::new(rotated).unwrap();
        let a = seminorm_general(&f, 1e-10).unwrap().value;
        let b = seminorm_general(&g, 1e-10).unwrap().value;
        prop_assert!((a - b).abs() <= 2e-10 * a.max(1.0));
    }

    #[test]
    fn witness_certifies_value(f in complex_poly()) {
        let res = seminorm_general(&f, 1e-10).unwrap();
        let z = res.witness;
        prop_assert!(z.norm() < 1.0);
        let at = (1.0 - z.norm_sqr()) * f.derivative().eval(z).norm();
        prop_assert!((at - res.value).abs() <= 1e-9 * res.value.max(1.0));
    }

    #[test]
    fn mobius_weight_identity(z in disc_point(0.95), lambda in disc_point(0.95)) {
        let phi = Mobius::new(lambda).unwrap();
        let w = phi.apply(z);
        prop_assert!(w.norm() < 1.0);
        let lhs = (1.0 - z.norm_sqr()) * phi.derivative(z).norm();
        let rhs = 1.0 - w.norm_sqr();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn recentering_vanishes_at_origin_and_matches_values(
        f in complex_poly(),
        lambda in disc_point(0.3),
        z in disc_point(0.2),
    ) {
        // |φ_λ(z)| < 1 and the truncated series converges fast for small |z|
        let big = mobius_recenter(&f, lambda, 60).unwrap();
        let phi = Mobius::new(lambda).unwrap();
        let want = f.eval(phi.apply(z)) - f.eval(lambda);
        prop_assert!((big.eval(z) - want).norm() <= 1e-10);
    }

    #[test]
    fn derivative_is_linear(f in complex_poly(), g in complex_poly(), c in nonzero_scalar(),
                            z in disc_point(0.99)) {
        let len = f.len().max(g.len());
        let (fr, gr) = (f.resized(len), g.resized(len));
        let sum: Vec<Complex64> = fr.as_slice().iter().zip(gr.as_slice()).map(|(a, b)| c * a + b).collect();
        let h = Coefficients::new(sum).unwrap();
        let lhs = h.derivative().eval(z);
        let rhs = c * f.derivative().eval(z) + g.derivative().eval(z);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn marty_coefficient_matches_finite_difference(
        f in complex_poly(),
        k in 1usize..8,
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        let u = Complex64::from_polar(1.0, theta);
        let h = 1e-5;
        let plus = mobius_recenter(&f, u * h, k).unwrap().coeff(k).norm_sqr();
        let minus = mobius_recenter(&f, -u * h, k).unwrap().coeff(k).norm_sqr();
        let fd = (plus - minus) / (2.0 * h);
        let want = 2.0 * (marty_first_order(&f, k) * u).re;
        prop_assert!((fd - want).abs() <= 1e-5, "{fd} vs {want}");
    }

    #[test]
    fn functional_scales_quadratically(f in complex_poly(), c in nonzero_scalar(),
                                       n in 1usize..10, t in 0.0f64..3.0) {
        let spec = FunctionalSpec::new(n, t).unwrap();
        let a = functional_value(&f, spec);
        let b = functional_value(&f.scaled(c), spec);
        prop_assert!((b - c.norm_sqr() * a).abs() <= 1e-12 * b.max(1.0));
    }

    #[test]
    fn weight_reduction_always_holds(f in complex_poly(), n in 1usize..10,
                                     t in 0.0f64..2.0, ds in 0.0f64..2.0) {
        prop_assert!(weight_reduction_check(&f, n, t, t + ds).unwrap());
    }

    #[test]
    fn objective_is_scale_and_gauge_invariant(f in complex_poly(), c in nonzero_scalar(),
                                              n in 1usize..6) {
        let spec = FunctionalSpec::new(n, 1.0).unwrap();
        let r = rayleigh_objective(&f, spec).unwrap();
        let scaled = rayleigh_objective(&f.scaled(c), spec).unwrap();
        prop_assert!((r - scaled).abs() <= 1e-11 * r.max(1.0));
        let g = gauge_normalize(&f).unwrap();
        let gauged = rayleigh_objective(&g, spec).unwrap();
        prop_assert!((r - gauged).abs() <= 1e-10 * r.max(1.0), "{r} vs {gauged}");
    }

    #[test]
    fn perturbation_never_increases_norm(f in nonneg_poly(), pick in 0usize..1000) {
        let n = f.len();
        let pairs: Vec<(usize, usize)> =
            (1..n).flat_map(|k| (k + 1..=n).map(move |m| (k, m))).collect();
        let (k, m) = pairs[pick % pairs.len()];
        let (g, delta) = lemma_perturbation(&f, n, k, m).unwrap();
        let spec = FunctionalSpec::new(n, 1.0).unwrap();
        let direct = functional_value(&g, spec) - functional_value(&f, spec);
        prop_assert!((delta - direct).abs() <= 1e-12 * functional_value(&f, spec).max(1.0));
        prop_assert!(g.is_nonnegative_real());
        let nf = seminorm_radial(&f, 1e-12).unwrap().value;
        let ng = seminorm_radial(&g, 1e-12).unwrap().value;
        prop_assert!(ng <= nf + 1e-10);
    }

    #[test]
    fn coefficient_json_round_trips(f in complex_poly()) {
        let back = Coefficients::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn bound_is_increasing(n in 1usize..2_000_000) {
        prop_assert!(log_bound_deficit(n + 1).unwrap() < log_bound_deficit(n).unwrap());
        prop_assert!(coefficient_bound(n + 1).unwrap() >= coefficient_bound(n).unwrap());
    }
}
