//! Expectile expansions for heavy (`0 < γ < 1`) and short (`γ < 0`) tails.

use crate::error::{domain, unsupported, Error, Result};
use crate::rv_kernel::d_kernel_log;
use crate::tail_models::{Branch, RvProfile, TailModel};

/// Coefficients of the heavy-tailed expectile expansion
///
/// `e_q ≈ lead F^←(q) (1 + d0 f + d1 h + d2 ε + d3 h² + ε(d4 ε + d5 h + d6 ψ + d6β β)
///  + f(d7 f + d8 h + d9 ε))`
///
/// with `f = 1/F^←(q)`, `h = 1 - q` and `ε, ψ, β` the auxiliaries of `U` at `1/(1-q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectileFrechetCoeffs {
    pub gamma: f64,
    pub rho: f64,
    pub eta: f64,
    pub mean: f64,
    /// `(γ/(1-γ))^γ`
    pub lead: f64,
    /// `(1/γ - 1)^{-ρ}/(1 - γ - ρ)`
    pub big_d: f64,
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub d5: f64,
    pub d6: f64,
    /// Coefficient of `ε β`.
    pub d6_drift: f64,
    pub d7: f64,
    pub d8: f64,
    pub d9: f64,
}

impl ExpectileFrechetCoeffs {
    pub fn labeled(&self) -> [(&'static str, f64); 14] {
        [
            ("lead", self.lead),
            ("D", self.big_d),
            ("d0", self.d0),
            ("d1", self.d1),
            ("d2", self.d2),
            ("d3", self.d3),
            ("d4", self.d4),
            ("d5", self.d5),
            ("d6", self.d6),
            ("d6β", self.d6_drift),
            ("d7", self.d7),
            ("d8", self.d8),
            ("d9", self.d9),
            ("mean", self.mean),
        ]
    }
}

pub fn expectile_frechet_coeffs(profile: &RvProfile, mean: f64) -> Result<ExpectileFrechetCoeffs> {
    let p = profile.params;
    let (g, rho, eta) = (p.gamma, p.rho, p.eta);
    if !(g > 0.0 && g < 1.0) {
        return Err(unsupported(alloc::format!("heavy-tailed expectile expansion needs 0 < γ < 1, got γ = {g}")));
    }
    if !mean.is_finite() {
        return Err(Error::Divergent(alloc::string::String::from("expectile needs a finite mean")));
    }
    let tau = g / (1.0 - g);
    let lt = libm::log(tau);
    let pw = libm::pow(tau, rho);
    let big_d = pw / (1.0 - g - rho);
    let d_rho = d_kernel_log(lt, rho);
    let g0 = mean * libm::pow(tau, -g);
    Ok(ExpectileFrechetCoeffs {
        gamma: g,
        rho,
        eta,
        mean,
        lead: libm::pow(tau, g),
        big_d,
        d0: g * g0,
        d1: -2.0 * g,
        d2: big_d + d_rho,
        d3: 2.0 * (g * g - g),
        d4: big_d * big_d * (rho / g + (g - 1.0) / (2.0 * g)) + big_d * (pw / g + d_rho),
        d5: -2.0 * (rho + g) * big_d - 2.0 * pw - 2.0 * g * d_rho,
        d6: pw * libm::pow(tau, eta) / (1.0 - g - rho - eta) + d_kernel_log(lt, rho + eta),
        d6_drift: big_d * d_kernel_log(lt, eta),
        d7: g0 * g0 * g * (1.0 - g) / 2.0,
        d8: 0.0,
        d9: g0 * (1.0 - g) * big_d,
    })
}

fn check_level(q: f64) -> Result<()> {
    if !(q > 0.5 && q < 1.0) {
        return Err(domain(alloc::format!("expectile approximations need 1/2 < q < 1, got {q}")));
    }
    Ok(())
}

/// Heavy-tailed expectile approximation of the given order.
pub fn expectile_approx(model: &dyn TailModel, q: f64, order: u8) -> Result<f64> {
    crate::weyl_engine::check_order(order)?;
    check_level(q)?;
    let prof = model.profile();
    if prof.branch != Branch::Frechet {
        return Err(unsupported("heavy-tailed expectile expansion needs γ > 0; use the short-tailed form"));
    }
    let mean = model.mean().ok_or_else(|| Error::Divergent(alloc::string::String::from("expectile needs a finite mean")))?;
    let c = expectile_frechet_coeffs(&prof, mean)?;
    let h = 1.0 - q;
    let xq = model.upper_quantile(h)?;
    let t = 1.0 / h;
    let (f, eps) = (1.0 / xq, prof.second(t));
    let mut s = 1.0;
    if order >= 2 {
        s += c.d0 * f + c.d1 * h + c.d2 * eps;
    }
    if order >= 3 {
        let psi = match prof.third(t) {
            Some(v) => v,
            None if prof.is_exact() => 0.0,
            None => return Err(unsupported("third-order profile unavailable")),
        };
        let beta = prof.drift(t);
        s += c.d3 * h * h
            + eps * (c.d4 * eps + c.d5 * h + c.d6 * psi + c.d6_drift * beta)
            + f * (c.d7 * f + c.d8 * h + c.d9 * eps);
    }
    Ok(c.lead * xq * s)
}

/// Constants of the short-tailed expectile expansion, where `x_F - U(t) = C t^γ (1 + A(t)/ρ (1 + o(1)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectileWeibullCoeffs {
    pub c: f64,
    /// `-1/γ`
    pub alpha: f64,
    /// `(α + 1)(x_F - E X)`
    pub x0: f64,
    pub rho: f64,
    pub endpoint: f64,
    pub mean: f64,
    /// Coefficient of `A(h^{-α/(α+1)})` inside the bracket.
    pub a_coeff: f64,
}

pub fn expectile_weibull_coeffs(model: &dyn TailModel) -> Result<ExpectileWeibullCoeffs> {
    let prof = model.profile();
    if prof.branch != Branch::Weibull {
        return Err(unsupported("short-tailed expectile expansion needs γ < 0"));
    }
    let c = prof
        .hall_scale()
        .ok_or_else(|| unsupported("short-tailed expectile expansion needs the scale C of x_F - U"))?;
    let mean = model.mean().ok_or_else(|| Error::Divergent(alloc::string::String::from("expectile needs a finite mean")))?;
    let xf = model.endpoint();
    let alpha = -1.0 / prof.params.gamma;
    let x0 = (alpha + 1.0) * (xf - mean);
    if !(x0 > 0.0) {
        return Err(domain("short-tailed expectile expansion needs x_F > E X"));
    }
    let rho = prof.params.rho;
    let a_coeff = alpha * libm::pow(c / x0, alpha * rho / (alpha + 1.0)) / (rho * (alpha + 1.0 - alpha * rho));
    Ok(ExpectileWeibullCoeffs { c, alpha, x0, rho, endpoint: xf, mean, a_coeff })
}

/// Short-tailed expectile approximation (orders 1 and 2):
/// `x_F - K(1 - K/x0 + a_coeff·A(h^{-α/(α+1)}))` with `K = (C^α x0 h)^{1/(α+1)}`.
pub fn expectile_weibull_approx(model: &dyn TailModel, q: f64, order: u8) -> Result<f64> {
    crate::weyl_engine::check_order(order)?;
    if order == 3 {
        return Err(unsupported("the short-tailed expectile expansion stops at second order"));
    }
    check_level(q)?;
    let w = expectile_weibull_coeffs(model)?;
    let h = 1.0 - q;
    let k = libm::pow(libm::pow(w.c, w.alpha) * w.x0 * h, 1.0 / (w.alpha + 1.0));
    if order == 1 {
        return Ok(w.endpoint - k);
    }
    let a = model.profile().second(libm::pow(h, -w.alpha / (w.alpha + 1.0)));
    let corr = -k / w.x0 + if a == 0.0 { 0.0 } else { w.a_coeff * a };
    Ok(w.endpoint - k * (1.0 + corr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tail_models::{BetaModel, Student};

    #[test]
    fn fixed_coefficients() {
        let m = Student::new(3.0).unwrap();
        let c = expectile_frechet_coeffs(&m.profile(), 0.0).unwrap();
        let g = 1.0 / 3.0;
        assert_eq!(c.d1, -2.0 * g);
        assert_eq!(c.d3, 2.0 * (g * g - g));
        assert_eq!((c.d0, c.d7, c.d8, c.d9), (0.0, 0.0, 0.0, 0.0));
        assert!((c.lead - libm::pow(0.5, g)).abs() < 1e-15);
    }

    #[test]
    fn rejects_heavy_gamma() {
        let mut p = Student::new(2.0).unwrap().profile();
        p.params.gamma = 1.25;
        assert!(expectile_frechet_coeffs(&p, 0.0).is_err());
    }

    #[test]
    fn uniform_short_tail_form() {
        let u = BetaModel::new(1.0, 1.0).unwrap();
        for q in [0.99, 0.9999] {
            let r = libm::sqrt(1.0 - q);
            let e = expectile_weibull_approx(&u, q, 2).unwrap();
            assert!((1.0 - e - r * (1.0 - r)).abs() < 1e-14);
            assert!((expectile_weibull_approx(&u, q, 1).unwrap() - (1.0 - r)).abs() < 1e-14);
        }
        assert!(expectile_weibull_approx(&u, 0.99, 3).is_err());
    }
}
