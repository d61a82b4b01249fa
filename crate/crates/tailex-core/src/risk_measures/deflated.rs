//! Tails and quantiles of the deflated risk `SX`.

use crate::error::{domain, Result};
use crate::rv_kernel::HallFunction;
use crate::scalers::Scaler;
use crate::tail_models::{Branch, TailModel};
use crate::weyl_engine::{check_order, frechet_weyl_expand, gw_expand, Expansion};

/// Expansion of `P(SX > x)`; the `κ = 0` case of the Weyl integral.
pub fn deflated_tail_expansion(model: &dyn TailModel, s: &Scaler, x: f64, order: u8) -> Result<Expansion> {
    check_order(order)?;
    match (model.profile().branch, s) {
        (Branch::Frechet, _) => frechet_weyl_expand(model, s, 0.0, x, order),
        (_, Scaler::Unit) => Ok(Expansion::new(model.sf(x), 1.0, order)),
        _ => gw_expand(model, s, 0.0, x, order),
    }
}

pub fn deflated_tail_approx(model: &dyn TailModel, s: &Scaler, x: f64, order: u8) -> Result<f64> {
    Ok(deflated_tail_expansion(model, s, x, order)?.value)
}

/// Hall form of `P(SX > x)` for `F̄(x) = b x^{-α}(1 + c x^ϱ + d x^{2ϱ})`.
pub fn deflated_hall(sf: &HallFunction, s: &Scaler) -> Result<HallFunction> {
    let alpha = -sf.alpha;
    if !(alpha > 0.0) {
        return Err(domain("survival function must decay like x^{-α} with α > 0"));
    }
    let m = s.moment(alpha)?;
    let c = sf.c * s.moment(alpha - sf.rho)? / m;
    let d = sf.d * s.moment(alpha - 2.0 * sf.rho)? / m;
    HallFunction::new(sf.scale * m, sf.alpha, c, d, sf.rho)
}

/// `VaR_q(SX) ≈ c_q(1 + k1 c_q^ϱ + k2 c_q^{2ϱ})` truncated at `order`, with
/// `c_q = (b E S^α/(1-q))^{1/α}`.
pub fn deflated_var_approx(sf: &HallFunction, s: &Scaler, q: f64, order: u8) -> Result<f64> {
    check_order(order)?;
    if !(q > 0.0 && q < 1.0) {
        return Err(domain(alloc::format!("q must lie in (0, 1), got {q}")));
    }
    let h = deflated_hall(sf, s)?;
    let k = h.inverse_coeffs()?;
    let r = (1.0 - q) / h.scale;
    let cq = libm::pow(r, 1.0 / h.alpha);
    let w = libm::pow(r, h.rho / h.alpha);
    let mut v = 1.0;
    if order >= 2 {
        v += k.c1 * w;
    }
    if order >= 3 {
        v += k.c2 * w * w;
    }
    Ok(cq * v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tail_models::HallModel;

    #[test]
    fn pareto_uniform_identity() {
        let p = HallModel::new(1.0, 3.0, 0.0, 0.0, -1.0).unwrap();
        for order in 1..=3 {
            let v = deflated_tail_approx(&p, &Scaler::uniform(), 2.0, order).unwrap();
            assert!((v - 0.03125).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_scaler_var() {
        let f = HallFunction::new(1.0, -3.0, 0.0, 0.0, -1.0).unwrap();
        let v = deflated_var_approx(&f, &Scaler::Unit, 0.999, 3).unwrap();
        assert!((v - 10.0).abs() < 1e-12);
    }

    #[test]
    fn var_leading_constant() {
        let f = HallFunction::new(1.0, -3.0, 0.5, 0.1, -1.0).unwrap();
        let s = Scaler::beta(1.0, 2.0).unwrap();
        let q = 1.0 - 1e-6;
        let cq = libm::cbrt(s.moment(3.0).unwrap() / (1.0 - q));
        let v1 = deflated_var_approx(&f, &s, q, 1).unwrap();
        assert!((v1 / cq - 1.0).abs() < 1e-14);
        let want = 0.5 * s.moment(4.0).unwrap() / (3.0 * s.moment(3.0).unwrap()) / cq;
        let v2 = deflated_var_approx(&f, &s, q, 2).unwrap();
        assert!((v2 / cq - 1.0 - want).abs() < 1e-14);
    }
}
