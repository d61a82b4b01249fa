//! Exact and asymptotic evaluation of deflated tails, Haezendonck–Goovaerts measures
//! and expectiles.

mod deflated;
mod expectile;
mod hg;
mod oracles;

pub use deflated::{deflated_hall, deflated_tail_approx, deflated_tail_expansion, deflated_var_approx};
pub use expectile::{
    expectile_approx, expectile_frechet_coeffs, expectile_weibull_approx, expectile_weibull_coeffs,
    ExpectileFrechetCoeffs, ExpectileWeibullCoeffs,
};
pub use hg::{hg_approx, hg_coeffs, hg_series, HgCoeffs, HgSeries};
pub use oracles::{exact_deflated_var, exact_expectile, exact_hg, exact_partial_moment, exact_weyl_integral};

use crate::error::{domain, unsupported, Result};
use crate::scalers::Scaler;
use crate::tail_models::{Branch, TailModel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    Hg { kappa: f64 },
    Expectile,
    /// `P(SX > x)`; with `x = None` the threshold is `F^←(q)`.
    DeflatedTail { x: Option<f64> },
    DeflatedVar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Exact,
    Approx(u8),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskQuery {
    pub measure: Measure,
    pub q: f64,
    pub order: Order,
}

impl RiskQuery {
    pub fn new(measure: Measure, q: f64, order: Order) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(domain(alloc::format!("q must lie in (0, 1), got {q}")));
        }
        if let Measure::Hg { kappa } = measure {
            if !(kappa >= 1.0) {
                return Err(domain(alloc::format!("H-G measure needs κ ≥ 1, got {kappa}")));
            }
        }
        if let Order::Approx(k) = order {
            crate::weyl_engine::check_order(k)?;
        }
        Ok(Self { measure, q, order })
    }

    /// Evaluates the query; `s` is only used by the deflated measures.
    pub fn eval(&self, model: &dyn TailModel, s: &Scaler) -> Result<f64> {
        let q = self.q;
        match (self.measure, self.order) {
            (Measure::Hg { kappa }, Order::Exact) => Ok(exact_hg(model, q, kappa)?.0),
            (Measure::Hg { kappa }, Order::Approx(k)) => hg_approx(model, q, kappa, k),
            (Measure::Expectile, Order::Exact) => exact_expectile(model, q),
            (Measure::Expectile, Order::Approx(k)) => match model.profile().branch {
                Branch::Frechet => expectile_approx(model, q, k),
                Branch::Weibull => expectile_weibull_approx(model, q, k),
                Branch::Gumbel => Err(unsupported("expectile expansions need γ ≠ 0")),
            },
            (Measure::DeflatedTail { x }, order) => {
                let x = match x {
                    Some(x) => x,
                    None => model.quantile(q)?,
                };
                match order {
                    Order::Exact => exact_weyl_integral(model, s, x, 0.0),
                    Order::Approx(k) => deflated_tail_approx(model, s, x, k),
                }
            }
            (Measure::DeflatedVar, Order::Exact) => exact_deflated_var(model, s, q),
            (Measure::DeflatedVar, Order::Approx(k)) => {
                let h = model
                    .survival_hall()
                    .ok_or_else(|| unsupported("deflated VaR expansion needs a Hall-form survival function"))?;
                deflated_var_approx(&h, s, q, k)
            }
        }
    }
}
