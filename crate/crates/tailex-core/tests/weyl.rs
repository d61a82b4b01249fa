//! Weyl-integral and partial-moment expansions against the quadrature oracles.

use proptest::prelude::*;
use tailex_core::risk_measures::{exact_partial_moment, exact_weyl_integral};
use tailex_core::scalers::Scaler;
use tailex_core::tail_models::{BetaModel, Burr, Exponential, HallModel, Student, TailModel};
use tailex_core::weyl_engine::{frechet_weyl_expand, gw_expand, partial_moment_expand, Expansion};

fn rel_errors(e: &Expansion, exact: f64) -> [f64; 3] {
    [1, 2, 3].map(|o| (e.value_at(o) / exact - 1.0).abs())
}

// Each order beats the previous one, and every order improves as the level moves out.
fn assert_converges(label: &str, rows: &[[f64; 3]], floor: f64) {
    for r in rows {
        assert!(r[1] < r[0] && (r[2] < r[1] || r[2] < floor), "{label}: {r:?}");
    }
    for w in rows.windows(2) {
        for k in 0..3 {
            assert!(w[1][k] < w[0][k] || w[1][k] < floor, "{label} order {}: {rows:?}", k + 1);
        }
    }
}

#[test]
fn frechet_expansion_against_oracle() {
    let s = Scaler::beta(2.0, 3.0).unwrap();
    let m = Burr::new(2.0, 1.5).unwrap();
    for kappa in [0.0, 0.5, 1.5] {
        let rows: Vec<_> = [1e2, 1e3, 1e4]
            .iter()
            .map(|&x| {
                let exact = exact_weyl_integral(&m, &s, x, kappa).unwrap();
                rel_errors(&frechet_weyl_expand(&m, &s, kappa, x, 3).unwrap(), exact)
            })
            .collect();
        assert_converges(&format!("burr κ={kappa}"), &rows, 1e-12);
        // First-order error falls like A(x) ∝ x^{-a} with a = 2.
        assert!((rows[0][0] / rows[1][0] - 100.0).abs() < 1.0, "{rows:?}");
    }
}

#[test]
fn weibull_expansion_against_oracle() {
    let s = Scaler::beta(2.0, 3.0).unwrap();
    for (a, b) in [(2.0, 3.0), (3.0, 6.0)] {
        let m = BetaModel::new(a, b).unwrap();
        for kappa in [0.0, 1.0] {
            let rows: Vec<_> = [1e-3, 1e-5, 1e-7]
                .iter()
                .map(|&p| {
                    let x = m.upper_quantile(p).unwrap();
                    let e = gw_expand(&m, &s, kappa, x, 3).unwrap();
                    assert!(!e.pre_asymptotic);
                    rel_errors(&e, exact_weyl_integral(&m, &s, x, kappa).unwrap())
                })
                .collect();
            assert_converges(&format!("beta({a},{b}) κ={kappa}"), &rows, 0.0);
        }
    }
}

#[test]
fn gumbel_expansion_against_oracle() {
    let s = Scaler::beta(2.0, 3.0).unwrap();
    let m = Exponential::new(1.0).unwrap();
    let rows: Vec<_> = [20.0, 80.0, 320.0]
        .iter()
        .map(|&x| rel_errors(&gw_expand(&m, &s, 0.0, x, 3).unwrap(), exact_weyl_integral(&m, &s, x, 0.0).unwrap()))
        .collect();
    assert_converges("exponential", &rows, 0.0);
    assert!(gw_expand(&m, &s, 0.0, 5.0, 3).unwrap().pre_asymptotic);
}

#[test]
fn partial_moments_against_oracle() {
    let models: [(&str, &dyn TailModel); 2] =
        [("burr", &Burr::new(2.0, 1.5).unwrap()), ("beta", &BetaModel::new(2.0, 3.0).unwrap())];
    for (name, m) in models {
        for kappa in [1.0, 2.0] {
            let rows: Vec<_> = [1e3, 1e5, 1e7]
                .iter()
                .map(|&t| {
                    let x = m.tail_quantile(t).unwrap();
                    rel_errors(&partial_moment_expand(m, kappa, t, 3).unwrap(), exact_partial_moment(m, x, kappa).unwrap())
                })
                .collect();
            assert_converges(&format!("{name} κ={kappa}"), &rows, 1e-13);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // For a pure Pareto tail above one, P(SX > x) = E[S^α] x^{-α} at every order.
    #[test]
    fn pareto_tail_is_reproduced_exactly(alpha in 0.5f64..6.0, a in 0.5f64..4.0, b in 0.5f64..4.0, x in 1.0f64..1e3) {
        let m = HallModel::new(1.0, alpha, 0.0, 0.0, -1.0).unwrap();
        let s = Scaler::beta(a, b).unwrap();
        let want = s.moment(alpha).unwrap() * x.powf(-alpha);
        for order in 1..=3 {
            let e = frechet_weyl_expand(&m, &s, 0.0, x, order).unwrap();
            prop_assert!((e.value / want - 1.0).abs() < 1e-12);
        }
        prop_assert!((exact_weyl_integral(&m, &s, x, 0.0).unwrap() / want - 1.0).abs() < 1e-9);
    }
}

#[test]
fn beta_one_kappa_scaling_is_a_partial_moment() {
    // S ~ Beta(1, κ): E[X^κ 1{SX > x}] = E[(X - x)_+^κ].
    let models: [&dyn TailModel; 3] =
        [&Burr::new(2.0, 1.5).unwrap(), &BetaModel::new(2.0, 3.0).unwrap(), &Exponential::new(1.0).unwrap()];
    for m in models {
        for kappa in [1.0, 2.0] {
            let s = Scaler::beta(1.0, kappa).unwrap();
            for p in [1e-2, 1e-4] {
                let x = m.upper_quantile(p).unwrap();
                let lhs = exact_weyl_integral(m, &s, x, kappa).unwrap();
                let rhs = exact_partial_moment(m, x, kappa).unwrap();
                assert!((lhs / rhs - 1.0).abs() < 1e-8, "{} κ={kappa} p={p}: {lhs} {rhs}", m.name());
            }
        }
    }
}

#[test]
fn orders_improve_deep_in_the_tail() {
    let s = Scaler::beta(2.0, 3.0).unwrap();
    let models: [&dyn TailModel; 7] = [
        &Burr::new(2.0, 1.5).unwrap(),
        &Burr::new(0.5, 4.0).unwrap(),
        &Student::new(1.2).unwrap(),
        &Student::new(3.0).unwrap(),
        &HallModel::new(1.0, 3.0, 0.5, 0.1, -1.0).unwrap(),
        &BetaModel::new(2.0, 3.0).unwrap(),
        &BetaModel::new(3.0, 6.0).unwrap(),
    ];
    for m in models {
        for kappa in [0.0, 0.5] {
            for p in [1e-4, 1e-6, 1e-8] {
                let x = m.upper_quantile(p).unwrap();
                let e = match m.profile().branch {
                    tailex_core::tail_models::Branch::Frechet => frechet_weyl_expand(m, &s, kappa, x, 3).unwrap(),
                    _ => gw_expand(m, &s, kappa, x, 3).unwrap(),
                };
                let r = rel_errors(&e, exact_weyl_integral(m, &s, x, kappa).unwrap());
                let floor = 1e-10;
                assert!(r[2] <= r[1].max(floor) && r[1] <= r[0].max(floor), "{} κ={kappa} p={p}: {r:?}", m.name());
            }
        }
    }
}

// log|order-1 error| against log F̄(x) over F̄ ∈ [1e-8, 1e-4].
fn first_order_slope(m: &dyn TailModel, s: &Scaler) -> f64 {
    let err = |p: f64| {
        let x = m.upper_quantile(p).unwrap();
        let e = match m.profile().branch {
            tailex_core::tail_models::Branch::Frechet => frechet_weyl_expand(m, s, 0.0, x, 1).unwrap(),
            _ => gw_expand(m, s, 0.0, x, 1).unwrap(),
        };
        (e.value / exact_weyl_integral(m, s, x, 0.0).unwrap() - 1.0).abs()
    };
    (err(1e-4).ln() - err(1e-8).ln()) / (1e-4f64.ln() - 1e-8f64.ln())
}

#[test]
fn first_order_rate() {
    let s = Scaler::beta(2.0, 3.0).unwrap();
    // Fréchet: A(x) ∝ x^ϱ with x ∝ F̄^{-1/α}. Weibull: A(t) ∝ t^ρ with t = 1/F̄.
    let burr = Burr::new(2.0, 1.5).unwrap();
    let student = Student::new(3.0).unwrap();
    let beta = BetaModel::new(2.0, 3.0).unwrap();
    for (m, want) in [(&burr as &dyn TailModel, 2.0 / 3.0), (&student, 2.0 / 3.0), (&beta, 1.0 / 3.0)] {
        let got = first_order_slope(m, &s);
        assert!((got / want - 1.0).abs() < 0.15, "{} slope {got}, predicted {want}", m.name());
    }
}
