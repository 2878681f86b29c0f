use num_complex::Complex64;
use proptest::prelude::*;

use fracgreen::distributed_order::{DistributedOrderSolver, OrderDensity};
use fracgreen::fraccalc::{caputo_derivative, rl_derivative, rl_integral, SampledFunction};
use fracgreen::single_order::{green, green_with_fallback};
use fracgreen::specfun::{mittag_leffler_neg, wright_m, wright_m_reflection};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn density() -> impl Strategy<Value = OrderDensity> {
    prop_oneof![
        (0.05f64..1.0).prop_map(|nu| OrderDensity::single(nu).unwrap()),
        (0.05f64..0.5, 0.5f64..0.95, 0.1f64..0.9)
            .prop_map(|(b1, b2, w)| OrderDensity::two_atoms(b1, w, b2, 1.0 - w).unwrap()),
        Just(OrderDensity::uniform()),
    ]
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn m_function_forms_agree(nu in 0.05f64..0.95, x in 0.0f64..3.0) {
        let tol = 1e-8;
        // Cancellation is reported, never returned as a value.
        match (wright_m(nu, x, tol), wright_m_reflection(nu, x, tol)) {
            (Ok(a), Ok(b)) => prop_assert!((a.value - b.value).abs() <= 10.0 * tol, "{} vs {}", a.value, b.value),
            (a, b) => {
                for r in [a.map(|_| ()), b.map(|_| ())] {
                    prop_assert!(matches!(r, Ok(()) | Err(fracgreen::Error::PrecisionLoss { .. })), "{:?}", r);
                }
            }
        }
    }

    #[test]
    fn mittag_leffler_is_bounded_and_decreasing(beta in 0.05f64..1.0, y in 0.0f64..50.0, dy in 0.0f64..5.0) {
        let a = mittag_leffler_neg(beta, y, 1e-10).unwrap().value;
        let b = mittag_leffler_neg(beta, y + dy, 1e-10).unwrap().value;
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b <= a + 2e-10, "E({}) = {} < E({}) = {}", y, a, y + dy, b);
    }

    #[test]
    fn evaluation_is_deterministic(nu in 0.05f64..0.95, x in 0.0f64..4.0) {
        let a = wright_m(nu, x, 1e-8);
        let b = wright_m(nu, x, 1e-8);
        prop_assert_eq!(a.map(|v| v.value.to_bits()), b.map(|v| v.value.to_bits()));
    }

    #[test]
    fn single_order_self_similarity(beta in 0.1f64..1.0, big_x in 0.0f64..3.0, t in 0.1f64..10.0) {
        let scale = t.powf(beta / 2.0);
        let u = green_with_fallback(beta, big_x * scale, t, 1e-12).unwrap().value * scale;
        let u1 = green_with_fallback(beta, big_x, 1.0, 1e-12).unwrap().value;
        prop_assert!((u - u1).abs() <= 1e-10, "{} vs {}", u, u1);
    }

    #[test]
    fn single_order_nonnegative(beta in 0.1f64..1.0, x in -8.0f64..8.0, t in 0.2f64..5.0) {
        prop_assert!(green_with_fallback(beta, x, t, 1e-10).unwrap().value >= -1e-10);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn density_spec_round_trips(d in density()) {
        let again: OrderDensity = d.spec_string().parse().unwrap();
        prop_assert_eq!(again.spec_string(), d.spec_string());
    }

    #[test]
    fn transform_is_normalized_at_one(d in density()) {
        // B(1) = ∫ b(β) dβ
        let b = d.b_transform(Complex64::new(1.0, 0.0)).unwrap();
        prop_assert!((b.re - 1.0).abs() < 1e-12 && b.im.abs() < 1e-12, "{}", b);
    }

    #[test]
    fn green_series_is_symmetric(d in density(), x in 0.0f64..3.0, t in 0.5f64..2.0) {
        let s = DistributedOrderSolver::new(d);
        let a = s.green_series(x, t, 1e-8);
        let b = s.green_series(-x, t, 1e-8);
        prop_assert_eq!(a.map(|g| g.value.to_bits()), b.map(|g| g.value.to_bits()));
    }

    #[test]
    fn green_series_is_nonnegative(d in density(), x in 0.0f64..4.0, t in 0.5f64..2.0) {
        let s = DistributedOrderSolver::new(d);
        prop_assert!(s.green_with_fallback(x, t, 1e-9).unwrap().value >= -1e-8);
    }

    #[test]
    fn fourier_hat_is_a_characteristic_function(d in density(), k in 0.0f64..5.0, dk in 0.0f64..2.0, t in 0.5f64..2.0) {
        let s = DistributedOrderSolver::new(d);
        let a = s.fourier_hat(k, t, 1e-10).unwrap();
        let b = s.fourier_hat(k + dk, t, 1e-10).unwrap();
        prop_assert!((-1e-10..=1.0 + 1e-10).contains(&a));
        prop_assert!(b <= a + 1e-9, "{} then {}", a, b);
    }

    #[test]
    fn reduction_to_single_order(nu in 0.1f64..0.9, x in 0.0f64..2.0, t in 0.5f64..2.0) {
        let s = DistributedOrderSolver::new(OrderDensity::single(nu).unwrap());
        let a = s.green_series(x, t, 1e-9).unwrap().value;
        prop_assert!((a - green(nu, x, t, 1e-10).unwrap().value).abs() < 1e-8);
    }

    #[test]
    fn operators_are_linear(alpha in 0.1f64..0.9, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let n = 64;
        let f = SampledFunction::uniform(1.0, n, |t| t.cos()).unwrap();
        let g = SampledFunction::uniform(1.0, n, |t| 1.0 + t * t).unwrap();
        let h = SampledFunction::uniform(1.0, n, |t| a * t.cos() + b * (1.0 + t * t)).unwrap();
        let t = 0.75;
        type Op = fn(&SampledFunction, f64, f64) -> fracgreen::Result<f64>;
        for op in [rl_integral as Op, rl_derivative, caputo_derivative] {
            let lhs = op(&h, alpha, t).unwrap();
            let rhs = a * op(&f, alpha, t).unwrap() + b * op(&g, alpha, t).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()), "{} vs {}", lhs, rhs);
        }
    }
}
