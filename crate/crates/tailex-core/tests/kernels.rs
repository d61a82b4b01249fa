//! Limit kernels against an independent Gauss–Legendre evaluation of their iterated
//! integrals, and Hall-class inversion.

use proptest::prelude::*;
use tailex_core::rv_kernel::{d_kernel, h_kernel, r_kernel, HallFunction, RvParams};

// 16-point Gauss–Legendre on [0, 1], composite over `PANELS` panels.
const NODES: [f64; 8] = [
    0.095_012_509_837_637_44,
    0.281_603_550_779_258_9,
    0.458_016_777_657_227_4,
    0.617_876_244_402_643_8,
    0.755_404_408_355_003,
    0.865_631_202_387_831_8,
    0.944_575_023_073_232_6,
    0.989_400_934_991_649_9,
];
const WEIGHTS: [f64; 8] = [
    0.189_450_610_455_068_5,
    0.182_603_415_044_923_6,
    0.169_156_519_395_002_5,
    0.149_595_988_816_576_7,
    0.124_628_971_255_533_9,
    0.095_158_511_682_492_8,
    0.062_253_523_938_647_9,
    0.027_152_459_411_754_1,
];
const PANELS: usize = 4;

/// `∫_0^l f`, valid for either sign of `l`.
fn gl(l: f64, f: &dyn Fn(f64) -> f64) -> f64 {
    let w = l / PANELS as f64;
    let mut s = 0.0;
    for p in 0..PANELS {
        let c = w * (p as f64 + 0.5);
        for (x, wt) in NODES.iter().zip(WEIGHTS) {
            s += wt * (f(c + 0.5 * w * x) + f(c - 0.5 * w * x));
        }
    }
    0.5 * w * s
}

fn h_oracle(x: f64, g: f64, r: f64) -> f64 {
    gl(x.ln(), &|a| (g * a).exp() * gl(a, &|b| (r * b).exp()))
}

fn r_oracle(x: f64, p: RvParams) -> f64 {
    gl(x.ln(), &|a| (p.gamma * a).exp() * gl(a, &|b| (p.rho * b).exp() * gl(b, &|c| (p.eta * c).exp())))
}

fn index() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), -2.0..2.0f64]
}

fn neg_index() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), -2.0..0.0f64]
}

fn arg() -> impl Strategy<Value = f64> {
    (0.05f64.ln()..20f64.ln()).prop_map(f64::exp)
}

proptest! {
    #[test]
    fn h_matches_iterated_integral(g in index(), r in neg_index(), x in arg()) {
        let h = h_kernel(x, g, r).unwrap();
        prop_assert!((h - h_oracle(x, g, r)).abs() <= 1e-9 * (1.0 + h.abs()));
    }

    #[test]
    fn h_on_the_cancelling_slice(r in -2.0..0.0f64, x in arg()) {
        let h = h_kernel(x, -r, r).unwrap();
        prop_assert!((h - h_oracle(x, -r, r)).abs() <= 1e-9 * (1.0 + h.abs()));
    }

    #[test]
    fn r_matches_iterated_integral(g in index(), r in neg_index(), e in neg_index(), x in arg()) {
        let p = RvParams::new(g, r, e).unwrap();
        let v = r_kernel(x, p).unwrap();
        prop_assert!((v - r_oracle(x, p)).abs() <= 1e-9 * (1.0 + v.abs()));
    }

    #[test]
    fn kernels_vanish_at_one(g in index(), r in neg_index(), e in neg_index()) {
        let p = RvParams::new(g, r, e).unwrap();
        prop_assert_eq!(d_kernel(1.0, g).unwrap(), 0.0);
        prop_assert_eq!(h_kernel(1.0, g, r).unwrap(), 0.0);
        prop_assert_eq!(r_kernel(1.0, p).unwrap(), 0.0);
    }

    #[test]
    fn d_kernel_derivative(g in index(), x in arg()) {
        let step = 1e-5 * x;
        let fd = (d_kernel(x + step, g).unwrap() - d_kernel(x - step, g).unwrap()) / (2.0 * step);
        prop_assert!((fd / x.powf(g - 1.0) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn hall_inverse_error_is_third_order(alpha in 0.5..4.0f64, c in -1.0..1.0f64, d in -1.0..1.0f64, rho in -1.5..-0.3f64) {
        let f = HallFunction::new(1.0, alpha, c, d, rho).unwrap();
        let rel = |t: f64| {
            let a = f.invert(t).unwrap();
            (f.solve(t).unwrap() - a).abs() / a
        };
        // error ~ t^{3ρ/α}; doubling log t cubes the decay factor
        let (t1, t2) = (1e8, 1e16);
        let bound = 10.0 * rel(t1).max(1e-15) * (t2 / t1).powf(3.0 * rho / alpha) + 1e-14;
        prop_assert!(rel(t2) <= bound, "{} vs bound {}", rel(t2), bound);
    }
}

#[test]
fn degenerate_closed_forms() {
    let l: f64 = 2.5f64.ln();
    assert!((h_kernel(2.5, 0.0, 0.0).unwrap() - l * l / 2.0).abs() < 1e-14);
    let p = RvParams::new(0.0, 0.0, 0.0).unwrap();
    assert!((r_kernel(2.5, p).unwrap() - l * l * l / 6.0).abs() < 1e-14);
}
