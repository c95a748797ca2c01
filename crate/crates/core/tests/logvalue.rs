use proptest::prelude::*;
use qasym_core::LogValue;

fn nonzero() -> impl Strategy<Value = f64> {
    prop_oneof![-1e300f64..-1e-300, 1e-300f64..1e300]
}

proptest! {
    #[test]
    fn product_is_exact_in_sign(a in nonzero(), b in nonzero()) {
        let p = LogValue::from_f64(a) * LogValue::from_f64(b);
        prop_assert_eq!(f64::from(p.sign), (a * b).signum());
        let exact = a.abs().ln() + b.abs().ln();
        prop_assert!((p.log_abs - exact).abs() <= 1e-13 * exact.abs().max(1.0));
    }

    #[test]
    fn sum_matches_plain(a in -1e10f64..1e10, b in -1e10f64..1e10) {
        let s = LogValue::from_f64(a) + LogValue::from_f64(b);
        let exact = a + b;
        prop_assume!(exact.abs() > 1e-3 * (a.abs() + b.abs()));
        prop_assert!((s.to_f64() - exact).abs() <= 1e-13 * (a.abs() + b.abs()));
    }

    #[test]
    fn exp_consistency(x in nonzero()) {
        let v = LogValue::from_f64(x);
        let back = LogValue::from_f64(v.to_f64());
        prop_assert!((back.log_abs - v.log_abs).abs() <= 1e-12 * v.log_abs.abs().max(1.0));
        prop_assert_eq!(back.sign, v.sign);
    }
}
