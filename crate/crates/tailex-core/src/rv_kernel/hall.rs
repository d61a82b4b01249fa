//! Hall-class functions `f(x) = a x^α (1 + c x^ρ + d x^{2ρ})`.

use crate::error::{domain, unsupported, Result};
use crate::numerics::{expand_bracket, find_root, RootSpec};

use super::drees::DreesTriple;

/// `f(x) = scale · x^alpha · (1 + c x^rho + d x^{2 rho})` with `rho < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HallFunction {
    pub scale: f64,
    pub alpha: f64,
    pub c: f64,
    pub d: f64,
    pub rho: f64,
}

/// Three-term inverse `lead · t^{1/α} (1 + c1 w + c2 w²)` with `w = (t/a)^{ρ/α}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HallInverseCoeffs {
    pub lead: f64,
    pub c1: f64,
    pub c2: f64,
}

/// Second- and third-order auxiliary functions of a Hall function.
///
/// `A(t) = ρ c s/(1 + c s)` and `B(t) = (2d/c) s` with `s = t^ρ`. `A` is itself
/// second-order regularly varying, `A(tx)/A(t) ≈ x^ρ (1 + β(t) D_ρ(x))`, and the
/// drift `β(t) = -ρ c s` is returned by [`HallAuxiliaries::drift`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HallAuxiliaries {
    pub rho: f64,
    pub c: f64,
    pub d: f64,
    /// `c = 0`: the function is an exact power law up to third order and `A ≡ 0`.
    pub exact: bool,
}

impl HallAuxiliaries {
    pub fn second(&self, t: f64) -> f64 {
        if self.exact {
            return 0.0;
        }
        let cs = self.c * libm::pow(t, self.rho);
        self.rho * cs / (1.0 + cs)
    }

    /// `B(t)`; `None` when `c = 0`.
    pub fn third(&self, t: f64) -> Option<f64> {
        if self.exact {
            return None;
        }
        Some(2.0 * self.d / self.c * libm::pow(t, self.rho))
    }

    pub fn drift(&self, t: f64) -> f64 {
        -self.rho * self.c * libm::pow(t, self.rho)
    }
}

impl HallFunction {
    pub fn new(scale: f64, alpha: f64, c: f64, d: f64, rho: f64) -> Result<Self> {
        if !(scale.is_finite() && scale != 0.0) {
            return Err(domain("Hall scale must be finite and non-zero"));
        }
        if !(alpha.is_finite() && c.is_finite() && d.is_finite()) {
            return Err(domain("Hall parameters must be finite"));
        }
        if !(rho < 0.0 && rho.is_finite()) {
            return Err(domain(alloc::format!("Hall correction exponent must be negative, got {rho}")));
        }
        Ok(Self { scale, alpha, c, d, rho })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let s = libm::pow(x, self.rho);
        self.scale * libm::pow(x, self.alpha) * (1.0 + self.c * s + self.d * s * s)
    }

    pub fn auxiliaries(&self) -> HallAuxiliaries {
        HallAuxiliaries { rho: self.rho, c: self.c, d: self.d, exact: self.c == 0.0 }
    }

    pub fn inverse_coeffs(&self) -> Result<HallInverseCoeffs> {
        let a = self.alpha;
        if a == 0.0 {
            return Err(unsupported("Hall inverse needs a non-zero exponent"));
        }
        let c1 = -self.c / a;
        let c2 = self.c * self.c / (2.0 * a * a) * (1.0 + a + 2.0 * self.rho) - self.d / a;
        Ok(HallInverseCoeffs { lead: libm::pow(self.scale, -1.0 / a), c1, c2 })
    }

    /// Three-term expansion of `f^←(t)`.
    ///
    /// The expansion is asymptotic as `t → ∞` when `α > 0` and as `t → 0⁺` when `α < 0`,
    /// which is the regime where `x = f^←(t) → ∞` in both cases.
    pub fn invert(&self, t: f64) -> Result<f64> {
        let k = self.inverse_coeffs()?;
        let r = t / self.scale;
        if !(r > 0.0) {
            return Err(domain("Hall inverse needs t/a > 0"));
        }
        let w = libm::pow(r, self.rho / self.alpha);
        Ok(libm::pow(r, 1.0 / self.alpha) * (1.0 + k.c1 * w + k.c2 * w * w))
    }

    /// `g(t) = f^←(1/t)` for `α < 0` written again as a Hall function of `t`.
    pub fn reciprocal_inverse(&self) -> Result<HallFunction> {
        if !(self.alpha < 0.0) {
            return Err(unsupported("reciprocal inverse needs a negative exponent"));
        }
        let k = self.inverse_coeffs()?;
        let e = -self.rho / self.alpha;
        let u = libm::pow(self.scale, e);
        HallFunction::new(k.lead, -1.0 / self.alpha, k.c1 * u, k.c2 * u * u, e)
    }

    /// `f^←(t)` for `α > 0` written again as a Hall function of `t`.
    pub fn direct_inverse(&self) -> Result<HallFunction> {
        if !(self.alpha > 0.0) {
            return Err(unsupported("direct inverse needs a positive exponent"));
        }
        let k = self.inverse_coeffs()?;
        let e = self.rho / self.alpha;
        let u = libm::pow(self.scale, -e);
        HallFunction::new(k.lead, 1.0 / self.alpha, k.c1 * u, k.c2 * u * u, e)
    }

    /// Numerical root of `f(x) = t` near the three-term inverse.
    pub fn solve(&self, t: f64) -> Result<f64> {
        let guess = self.invert(t)?;
        if !(guess > 0.0 && guess.is_finite()) {
            return Err(domain("Hall inverse guess is not positive; t is outside the asymptotic range"));
        }
        let g = |x: f64| self.eval(x) / t - 1.0;
        let (lo, hi) = expand_bracket(g, guess * 0.9, guess * 1.1, 0.0, f64::INFINITY, 200)?;
        find_root(g, &RootSpec::new(lo, hi).with_rel_tol(1e-15))
    }
}

impl DreesTriple for HallFunction {
    fn first_excess(&self, t: f64, x: f64) -> f64 {
        // (f(tx) - f(t)) / (α f(t)) - D_α(x), assembled without cancellation.
        let s = libm::pow(t, self.rho);
        let xr = libm::pow(x, self.rho);
        let num = self.c * s * (xr - 1.0) + self.d * s * s * (xr * xr - 1.0);
        let den = 1.0 + self.c * s + self.d * s * s;
        libm::pow(x, self.alpha) * (num / den) / self.alpha
    }

    fn second(&self, t: f64) -> f64 {
        self.auxiliaries().second(t)
    }

    fn third(&self, t: f64) -> f64 {
        self.auxiliaries().third(t).unwrap_or(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burr_inverse_coefficients() {
        let (a, b) = (2.0, 1.5);
        let f = HallFunction::new(1.0, -a * b, -b, b * (b + 1.0) / 2.0, -a).unwrap();
        let k = f.inverse_coeffs().unwrap();
        assert!((k.lead - 1.0).abs() < 1e-15);
        assert!((k.c1 + 1.0 / a).abs() < 1e-15);
        assert!((k.c2 - (1.0 - a) / (2.0 * a * a)).abs() < 1e-15);
    }

    #[test]
    fn pure_power_inverse_is_exact() {
        let f = HallFunction::new(2.0, 3.0, 0.0, 0.0, -1.0).unwrap();
        let t = 1234.5;
        let x = f.invert(t).unwrap();
        assert!((f.eval(x) / t - 1.0).abs() < 1e-14);
        assert!(f.auxiliaries().exact);
        assert_eq!(f.auxiliaries().second(10.0), 0.0);
        assert_eq!(f.auxiliaries().third(10.0), None);
    }

    #[test]
    fn zero_exponent_unsupported() {
        let f = HallFunction::new(1.0, 0.0, 1.0, 0.0, -1.0).unwrap();
        assert!(f.invert(2.0).is_err());
    }

    #[test]
    fn reciprocal_inverse_matches_expansion() {
        let (a, b) = (2.0, 1.5);
        let f = HallFunction::new(1.0, -a * b, -b, b * (b + 1.0) / 2.0, -a).unwrap();
        let g = f.reciprocal_inverse().unwrap();
        let t = 1e6;
        assert!((g.eval(t) / f.invert(1.0 / t).unwrap() - 1.0).abs() < 1e-14);
        assert!((g.rho + 1.0 / b).abs() < 1e-15);
    }
}
