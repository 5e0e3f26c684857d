//! Property-based invariants across the numeric and symbolic layers:
//! quadrature algebra, norm identities, slope detection, and the
//! equivalences between the generic condition machinery and its classical
//! specializations.

use proptest::prelude::*;

use splitkern::gluing::{glue, GluingInstance};
use splitkern::hardy::{condition_one, InequalityInstance, Verdict};
use splitkern::kernels::{catalog, KernelId, PhiMap};
use splitkern::numerics::{integrate, log_grid, sup_scan, Interval};
use splitkern::spaces::{
    plw_norm, powerlog_norm_class, EndpointKind, Exponent, PowerLogWeight,
};

const REL_TOL: f64 = 1e-9;

fn closed_power_integral(a: f64, lo: f64, hi: f64) -> f64 {
    if (a + 1.0).abs() < 1e-12 {
        (hi / lo).ln()
    } else {
        (hi.powf(a + 1.0) - lo.powf(a + 1.0)) / (a + 1.0)
    }
}

fn hardy_instance(u: PowerLogWeight, v: PowerLogWeight, p: f64, q: f64) -> InequalityInstance {
    let (spec, kernel) = catalog(KernelId::Hardy).unwrap();
    InequalityInstance {
        spec,
        kernel: Some(kernel),
        u,
        v,
        p: Exponent::new(p).unwrap(),
        q: Exponent::new(q).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integrate_is_linear(
        a in -0.5f64..1.5,
        b in -0.5f64..1.5,
        c1 in 0.1f64..5.0,
        c2 in 0.1f64..5.0,
        lo in 0.1f64..1.0,
        span in 1.0f64..20.0,
    ) {
        let hi = lo + span;
        let iv = Interval::new(lo, hi);
        let combined = integrate(|x| c1 * x.powf(a) + c2 * x.powf(b), iv, REL_TOL)
            .unwrap()
            .value;
        let expected = c1 * closed_power_integral(a, lo, hi) + c2 * closed_power_integral(b, lo, hi);
        prop_assert!((combined - expected).abs() <= 10.0 * REL_TOL * expected.abs() + 1e-12);
    }

    #[test]
    fn integrate_is_additive_over_subintervals(
        a in -0.5f64..1.5,
        lo in 0.1f64..1.0,
        mid_frac in 0.2f64..0.8,
        span in 1.0f64..20.0,
    ) {
        let hi = lo + span;
        let mid = lo + mid_frac * span;
        let f = |x: f64| x.powf(a);
        let whole = integrate(f, Interval::new(lo, hi), REL_TOL).unwrap().value;
        let parts = integrate(f, Interval::new(lo, mid), REL_TOL).unwrap().value
            + integrate(f, Interval::new(mid, hi), REL_TOL).unwrap().value;
        prop_assert!((whole - parts).abs() <= 10.0 * REL_TOL * whole.abs() + 1e-12);
    }

    #[test]
    fn sup_scan_recovers_monomial_slopes(e in -2.0f64..2.0) {
        let grid = log_grid(1e-3, 1e3, 8);
        let scan = sup_scan(|r| r.powf(e), &grid);
        prop_assert!((scan.left_slope - e).abs() < 1e-3);
        prop_assert!((scan.right_slope - e).abs() < 1e-3);
    }

    #[test]
    fn holder_inequality(
        a in -0.4f64..1.0,
        b in -0.4f64..1.0,
        lo in 0.05f64..0.5,
        span in 0.5f64..30.0,
        p_idx in 0usize..3,
    ) {
        let p = Exponent::new([1.5, 2.0, 3.0][p_idx]).unwrap();
        let iv = Interval::new(lo, lo + span);
        let f = PowerLogWeight::power(1.0, a);
        let g = PowerLogWeight::power(1.0, b);
        let lhs = plw_norm(&f.mul(&g), Exponent::one(), iv);
        let rhs = plw_norm(&f, p, iv) * plw_norm(&g, p.conjugate(), iv);
        prop_assert!(lhs <= rhs * (1.0 + 1e-6), "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn norm_is_homogeneous(
        a in -0.4f64..1.0,
        bb in -1.0f64..1.0,
        k in 0.01f64..100.0,
        p_idx in 0usize..3,
        lo in 0.05f64..0.5,
        span in 0.5f64..30.0,
    ) {
        let p = Exponent::new([1.5, 2.0, 3.0][p_idx]).unwrap();
        let iv = Interval::new(lo, lo + span);
        let w = PowerLogWeight::new(1.0, a, bb).unwrap();
        let n1 = plw_norm(&w.scaled(k), p, iv);
        let n2 = k * plw_norm(&w, p, iv);
        prop_assert!((n1 - n2).abs() <= 1e-9 * n2.abs() + 1e-12);
    }

    #[test]
    fn norm_grows_with_the_interval(
        a in -0.4f64..1.0,
        lo in 0.05f64..0.5,
        span in 0.5f64..30.0,
        shrink in 0.1f64..0.9,
    ) {
        let hi = lo + span;
        let inner = Interval::new(lo + 0.25 * shrink * span, hi - 0.25 * shrink * span);
        let w = PowerLogWeight::power(1.0, a);
        let n_inner = plw_norm(&w, Exponent::two(), inner);
        let n_outer = plw_norm(&w, Exponent::two(), Interval::new(lo, hi));
        prop_assert!(n_inner <= n_outer * (1.0 + 1e-9));
    }

    #[test]
    fn norm_class_matches_quadrature(
        a in -2.0f64..0.8,
        p_idx in 0usize..3,
    ) {
        let pv = [1.5, 2.0, 3.0][p_idx];
        // Stay away from the borderline exponent a·p = −1.
        prop_assume!((a * pv + 1.0).abs() >= 0.05);
        let p = Exponent::new(pv).unwrap();
        let w = PowerLogWeight::power(1.0, a);
        let class = powerlog_norm_class(&w, p, EndpointKind::Origin);
        let numeric = integrate(|x| w.eval(x).powf(pv), Interval::new(0.0, 1.0), 1e-8);
        match numeric {
            Ok(q) => {
                prop_assert!(class.is_finite(), "classified infinite, quadrature {q:?}");
            }
            Err(_) => prop_assert!(!class.is_finite()),
        }
    }

    #[test]
    fn phi_map_round_trip(
        kappa in 0.1f64..10.0,
        m in prop_oneof![-3.0f64..-0.2, 0.2f64..3.0],
        y in 1e-3f64..1e3,
    ) {
        let phi = PhiMap::new(kappa, m);
        let back = phi.inverse_value(phi.eval(y));
        prop_assert!((back - y).abs() <= 1e-9 * y);
    }

    #[test]
    fn hardy_condition_matches_classical_form(
        beta in 0.6f64..1.4,
        gamma in -0.5f64..0.4,
    ) {
        // φ = id: the generic condition must reduce to the classical
        // product ‖u‖_{L_q(r,∞)}·‖v^{-1}‖_{L_{p'}(0,r)}.
        let u = PowerLogWeight::power(1.0, -beta);
        let v = PowerLogWeight::power(1.0, gamma);
        let inst = hardy_instance(u, v, 2.0, 2.0);
        let cv = condition_one(&inst);
        let grid = log_grid(1e-6, 1e6, 16);
        let direct = sup_scan(
            |r| {
                plw_norm(&u, Exponent::two(), Interval::to_infinity(r))
                    * plw_norm(&v.inverse(), Exponent::two(), Interval::from_zero(r))
            },
            &grid,
        );
        if cv.verdict == Verdict::Finite {
            prop_assert!((cv.sup_estimate - direct.sup_estimate).abs()
                <= 1e-9 * direct.sup_estimate);
        }
        // Exponent of the scanned product: r^{1−β−γ}; the verdicts agree
        // with the classical criterion away from the boundary.
        let e = 1.0 - beta - gamma;
        if e.abs() > 0.05 {
            prop_assert_eq!(cv.verdict, Verdict::Infinite);
        } else if e.abs() < 1e-12 {
            prop_assert_eq!(cv.verdict, Verdict::Finite);
        }
    }

    #[test]
    fn condition_sup_scales_with_constant_weights(
        beta in 0.6f64..1.4,
        cu in 0.1f64..10.0,
        cv_scale in 0.1f64..10.0,
    ) {
        // γ chosen so the scanned product is exactly flat.
        let gamma = 1.0 - beta;
        let base = hardy_instance(
            PowerLogWeight::power(1.0, -beta),
            PowerLogWeight::power(1.0, gamma),
            2.0,
            2.0,
        );
        let scaled = hardy_instance(
            PowerLogWeight::power(cu, -beta),
            PowerLogWeight::power(cv_scale, gamma),
            2.0,
            2.0,
        );
        let a = condition_one(&base);
        let b = condition_one(&scaled);
        prop_assert_eq!(a.verdict, b.verdict);
        let expected = a.sup_estimate * cu / cv_scale;
        prop_assert!((b.sup_estimate - expected).abs() <= 1e-9 * expected);
    }

    #[test]
    fn joint_functional_dominates_splits(
        af in -1.4f64..0.4,
        ag in -1.4f64..0.4,
        t in 1e-3f64..1e3,
    ) {
        let one = PowerLogWeight::one;
        let inst = GluingInstance::new(
            PowerLogWeight::power(1.0, af),
            PowerLogWeight::power(1.0, ag),
            one(),
            PowerLogWeight::power(1.0, -1.0),
            PowerLogWeight::power(1.0, -1.0),
            one(),
            PhiMap::identity(),
            Exponent::two(),
            Exponent::two(),
        ).unwrap();
        let joint = glue(&inst);
        let j = joint.eval(t);
        for s in [inst.split_one(t), inst.split_two(t)] {
            if s.is_infinite() {
                prop_assert!(j.is_infinite());
            } else {
                prop_assert!(j >= s * (1.0 - 1e-9), "joint {j} split {s} at t={t}");
            }
        }
    }

    #[test]
    fn symbolic_exponent_matches_measured_slope(
        beta in 0.6f64..1.4,
        gamma in -0.5f64..0.4,
    ) {
        let e = 1.0 - beta - gamma;
        prop_assume!(e.abs() > 0.05);
        let inst = hardy_instance(
            PowerLogWeight::power(1.0, -beta),
            PowerLogWeight::power(1.0, gamma),
            2.0,
            2.0,
        );
        let cv = condition_one(&inst);
        prop_assert!(cv.symbolic_exponent.is_some());
        prop_assert!((cv.symbolic_exponent.unwrap() - e).abs() < 1e-9);
        prop_assert!((cv.right_slope - e).abs() < 1e-3, "slope {} vs {e}", cv.right_slope);
    }
}
