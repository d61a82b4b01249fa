use proptest::prelude::*;
use tailex_core::scalers::Scaler;

fn shape() -> impl Strategy<Value = f64> {
    0.3..6.0f64
}

proptest! {
    #[test]
    fn moment_matches_quadrature(a in shape(), b in shape(), l in 0.0..8.0f64) {
        let s = Scaler::beta(a, b).unwrap();
        let m = s.moment(l).unwrap();
        let q = s.moment_by_quadrature(l).unwrap();
        prop_assert!((m / q - 1.0).abs() < 1e-8, "{m} vs {q}");
    }

    #[test]
    fn moments_decrease(a in shape(), b in shape(), l in 0.0..8.0f64) {
        let s = Scaler::beta(a, b).unwrap();
        prop_assert!(s.moment(l + 0.5).unwrap() < s.moment(l).unwrap());
        prop_assert_eq!(s.moment(0.0).unwrap(), 1.0);
    }

    #[test]
    fn slope_is_derivative(a in shape(), b in shape(), l in 0.5..6.0f64) {
        let s = Scaler::beta(a, b).unwrap();
        let h = 1e-5;
        let fd = (s.moment(l + h).unwrap() - s.moment(l - h).unwrap()) / (2.0 * h);
        prop_assert!((s.moment_slope(l).unwrap() / fd - 1.0).abs() < 1e-6);
    }

    #[test]
    fn upper_tail_consistent_with_cdf(a in shape(), b in shape(), h in 0.01..0.5f64) {
        let s = Scaler::beta(a, b).unwrap();
        prop_assert!((s.sf_near_one(h) - (1.0 - s.cdf(1.0 - h))).abs() < 1e-12);
    }

    #[test]
    fn hall_tail_approximates_upper_tail(a in 0.5..4.0f64, b in 0.5..4.0f64) {
        let s = Scaler::beta(a, b).unwrap();
        let t = s.tail().unwrap();
        // relative error of the three-term Hall form is O(h³)
        let err = |h: f64| (t.hall.eval(1.0 / h) / s.sf_near_one(h) - 1.0).abs();
        prop_assert!(err(1e-3) < 1e-6 * (1.0 + a * b).powi(3));
    }
}

#[test]
fn uniform_and_unit() {
    let u = Scaler::uniform();
    assert!((u.moment(3.0).unwrap() - 0.25).abs() < 1e-15);
    assert_eq!(Scaler::Unit.moment(7.0).unwrap(), 1.0);
    assert!(Scaler::Unit.tail().is_none());
    assert!(u.moment(-1.0).is_err());
}
