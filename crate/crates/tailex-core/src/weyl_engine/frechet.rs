//! Fréchet case: `F̄ ∈ 3RV_{-α,ϱ,ς}` and a scaler with finite moments.

use crate::error::{domain, unsupported, Result};
use crate::scalers::Scaler;
use crate::tail_models::TailModel;

use super::{check_order, Expansion};

/// Coefficients of `E[X^κ 1{SX>x}] ≈ x^κ F̄(x) α/(α-κ) (d0 + d1 A + d2 A² + d3 A B + d3β A β)`.
///
/// The third-order term splits in two: `d3` multiplies `A B`, `d3_drift` multiplies
/// `A β`, where `β` is the drift of `A` (`A(tx)/A(t) ≈ x^ϱ(1 + β(t) D_ϱ(x))`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrechetWeylCoeffs {
    pub kappa: f64,
    pub alpha: f64,
    pub varrho: f64,
    pub varsigma: f64,
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d3_drift: f64,
}

// Below this |r| the difference quotient of the moment function is replaced by its slope.
const SLOPE_CUTOFF: f64 = 1e-7;

/// `(E S^{p-r} - E S^p)/r`.
fn moment_dq(s: &Scaler, p: f64, r: f64) -> Result<f64> {
    if r.abs() < SLOPE_CUTOFF {
        return Ok(-s.moment_slope(p)?);
    }
    Ok((s.moment(p - r)? - s.moment(p)?) / r)
}

pub fn frechet_weyl_coeffs(kappa: f64, alpha: f64, varrho: f64, varsigma: f64, s: &Scaler) -> Result<FrechetWeylCoeffs> {
    if !(kappa >= 0.0) {
        return Err(domain(alloc::format!("κ must be non-negative, got {kappa}")));
    }
    if !(kappa < alpha) {
        return Err(domain(alloc::format!("moment diverges: need κ < α, got κ = {kappa}, α = {alpha}")));
    }
    if !(varrho <= 0.0 && varsigma <= 0.0) {
        return Err(domain("second- and third-order indices must be non-positive"));
    }
    let p = alpha - kappa;
    let p1 = p - varrho;
    let p2 = p1 - varsigma;
    let m = |l: f64| s.moment(l);
    let ka = kappa / alpha;
    let d0 = m(p)?;
    let d1 = moment_dq(s, p, varrho)? + ka * m(p1)? / p1;
    let d2 = ka * moment_dq(s, p1, varrho)? / p1;
    let d3_drift = ka * moment_dq(s, p1, varsigma)? / p1;
    let d3 = ka * m(p2)? / p2 + moment_dq(s, p, varrho + varsigma)?;
    Ok(FrechetWeylCoeffs { kappa, alpha, varrho, varsigma, d0, d1, d2, d3, d3_drift })
}

/// Expansion of `E[X^κ 1{SX>x}]` for a Fréchet-domain model.
pub fn frechet_weyl_expand(model: &dyn TailModel, s: &Scaler, kappa: f64, x: f64, order: u8) -> Result<Expansion> {
    check_order(order)?;
    let prof = model
        .sf_profile()
        .ok_or_else(|| unsupported("model has no survival-scale regular-variation profile"))?;
    let p = prof.params;
    let alpha = -p.gamma;
    let c = frechet_weyl_coeffs(kappa, alpha, p.rho, p.eta, s)?;
    if !(x > 0.0) {
        return Err(domain(alloc::format!("x must be positive, got {x}")));
    }
    let a = prof.second(x);
    let b = match prof.third(x) {
        Some(b) => b,
        None if prof.is_exact() => 0.0,
        None if order >= 3 => return Err(unsupported("third-order profile unavailable")),
        None => 0.0,
    };
    let beta = prof.drift(x);
    let leading = libm::pow(x, kappa) * model.sf(x) * alpha / (alpha - kappa) * c.d0;
    let mut e = Expansion::new(leading, c.d0, order);
    e.push("d1·A(x)", 2, c.d1, a);
    e.push("d2·A²(x)", 3, c.d2, a * a);
    e.push("d3·A(x)B(x)", 3, c.d3, a * b);
    e.push("d3β·A(x)β(x)", 3, c.d3_drift, a * beta);
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_zero_matches_deflation_coefficients() {
        let s = Scaler::beta(2.0, 3.0).unwrap();
        let (al, r) = (2.5, -0.7);
        let c = frechet_weyl_coeffs(0.0, al, r, -0.4, &s).unwrap();
        assert!((c.d0 - s.moment(al).unwrap()).abs() < 1e-15);
        let d1 = (s.moment(al - r).unwrap() - s.moment(al).unwrap()) / r;
        assert!((c.d1 - d1).abs() < 1e-15);
        assert_eq!(c.d2, 0.0);
        assert_eq!(c.d3_drift, 0.0);
    }

    #[test]
    fn unit_scaler() {
        let c = frechet_weyl_coeffs(1.0, 3.0, -1.0, -1.0, &Scaler::Unit).unwrap();
        assert_eq!(c.d0, 1.0);
        assert!((c.d1 - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_example() {
        let c = frechet_weyl_coeffs(1.0, 3.0, -1.0, -1.0, &Scaler::uniform()).unwrap();
        assert!((c.d0 - 1.0 / 3.0).abs() < 1e-15);
        // (1/4 - 1/3)/(-1) + (1/4)/(3·3)
        assert!((c.d1 - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_divergent_moment() {
        assert!(frechet_weyl_coeffs(3.0, 3.0, -1.0, -1.0, &Scaler::uniform()).is_err());
    }

    #[test]
    fn slope_branch_is_continuous() {
        let s = Scaler::beta(1.5, 2.0).unwrap();
        let a = frechet_weyl_coeffs(0.5, 2.0, -1e-8, -1.0, &s).unwrap();
        let b = frechet_weyl_coeffs(0.5, 2.0, -1e-5, -1.0, &s).unwrap();
        assert!((a.d1 - b.d1).abs() < 1e-4 * b.d1.abs());
    }
}
