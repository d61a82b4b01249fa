use alloc::string::String;

use super::{branch_of, check_positive, check_prob, Auxiliary, RvProfile, TailModel};
use crate::error::Result;
use crate::numerics::beta;
use crate::rv_kernel::{HallFunction, LimitForm, RvParams};

/// Burr XII: `F̄(x) = (1 + x^a)^{-b}` on `x ≥ 0`.
///
/// `U ∈ 3RV_{1/(ab), -1/b, -1/b}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Burr {
    pub a: f64,
    pub b: f64,
}

impl Burr {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_positive("burr a", a)?;
        check_positive("burr b", b)?;
        Ok(Self { a, b })
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (self.a * self.b)
    }

    /// Survival function in Hall form: `x^{-ab}(1 - b x^{-a} + b(b+1)/2 x^{-2a} + ...)`.
    pub fn sf_hall(&self) -> HallFunction {
        let (a, b) = (self.a, self.b);
        HallFunction { scale: 1.0, alpha: -a * b, c: -b, d: b * (b + 1.0) / 2.0, rho: -a }
    }
}

impl TailModel for Burr {
    fn name(&self) -> String {
        alloc::format!("burr:a={},b={}", self.a, self.b)
    }

    fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        libm::exp(-self.b * libm::log1p(libm::pow(x, self.a)))
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        -libm::expm1(-self.b * libm::log1p(libm::pow(x, self.a)))
    }

    fn upper_quantile(&self, s: f64) -> Result<f64> {
        check_prob(s)?;
        if s == 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(libm::pow(libm::expm1(-libm::log(s) / self.b), 1.0 / self.a))
    }

    fn endpoint(&self) -> f64 {
        f64::INFINITY
    }

    fn lower_endpoint(&self) -> f64 {
        0.0
    }

    fn mean(&self) -> Option<f64> {
        if self.a * self.b <= 1.0 {
            return None;
        }
        beta(self.b - 1.0 / self.a, 1.0 / self.a).ok().map(|v| v / self.a)
    }

    fn profile(&self) -> RvProfile {
        let g = self.gamma();
        let r = -1.0 / self.b;
        let u = self.sf_hall().reciprocal_inverse().expect("Burr survival exponent is negative");
        RvProfile {
            branch: branch_of(g),
            params: RvParams { gamma: g, rho: r, eta: r },
            form: LimitForm::PowerRatio,
            aux: Auxiliary::Hall(u),
        }
    }

    fn survival_hall(&self) -> Option<HallFunction> {
        Some(self.sf_hall())
    }

    fn sf_profile(&self) -> Option<RvProfile> {
        let r = -self.a;
        Some(RvProfile {
            branch: branch_of(self.gamma()),
            params: RvParams { gamma: -self.a * self.b, rho: r, eta: r },
            form: LimitForm::PowerRatio,
            aux: Auxiliary::Hall(self.sf_hall()),
        })
    }

    fn first_excess(&self, t: f64, x: f64) -> Result<f64> {
        // U(tx)/U(t) = x^γ q^{1/a} with q = 1 + u(1 - x^ρ)/(1 - u), u = t^{-1/b}.
        let g = self.gamma();
        let rho = -1.0 / self.b;
        let u = libm::pow(t, rho);
        let q1 = u * (1.0 - libm::pow(x, rho)) / (1.0 - u);
        Ok(libm::pow(x, g) * libm::expm1(libm::log1p(q1) / self.a) / g)
    }
}
