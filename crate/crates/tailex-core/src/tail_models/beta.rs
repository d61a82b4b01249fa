use alloc::string::String;

use super::{branch_of, check_positive, check_prob, Auxiliary, RvProfile, TailModel};
use crate::error::Result;
use crate::numerics::{beta, inc_beta_inv, inc_beta_pair};
use crate::rv_kernel::{HallFunction, LimitForm, RvParams};

/// Beta(a, b) on `(0, 1)`; `x_F - U ∈ 3RV_{-1/b, -1/b, -1/b}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaModel {
    pub a: f64,
    pub b: f64,
}

impl BetaModel {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_positive("beta a", a)?;
        check_positive("beta b", b)?;
        Ok(Self { a, b })
    }

    /// `x_F - U(t) = w (1 + c1 w + c2 w²)`, `w = (t/(bB(a,b)))^{-1/b}`, as a Hall function of `t`.
    pub fn gap_hall(&self) -> HallFunction {
        let (a, b) = (self.a, self.b);
        let k = libm::pow(b * beta(a, b).expect("positive shapes"), 1.0 / b);
        let c1 = (a - 1.0) / (b + 1.0);
        let c2 = c1 * (c1 + (a + b) / (2.0 * (b + 2.0)));
        HallFunction { scale: k, alpha: -1.0 / b, c: c1 * k, d: c2 * k * k, rho: -1.0 / b }
    }
}

impl TailModel for BetaModel {
    fn name(&self) -> String {
        alloc::format!("beta:a={},b={}", self.a, self.b)
    }

    fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        if x >= 1.0 {
            return 0.0;
        }
        inc_beta_pair(self.b, self.a, 1.0 - x, x).expect("valid shapes").0
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        inc_beta_pair(self.a, self.b, x, 1.0 - x).expect("valid shapes").0
    }

    fn upper_quantile(&self, s: f64) -> Result<f64> {
        check_prob(s)?;
        Ok(1.0 - inc_beta_inv(s, self.b, self.a)?)
    }

    fn endpoint(&self) -> f64 {
        1.0
    }

    fn lower_endpoint(&self) -> f64 {
        0.0
    }

    fn sf_gap(&self, g: f64) -> f64 {
        if g <= 0.0 {
            return 0.0;
        }
        if g >= 1.0 {
            return 1.0;
        }
        inc_beta_pair(self.b, self.a, g, 1.0 - g).expect("valid shapes").0
    }

    fn endpoint_gap(&self, t: f64) -> Result<f64> {
        if !(t >= 1.0) {
            return Err(crate::error::domain("endpoint gap needs t >= 1"));
        }
        inc_beta_inv(1.0 / t, self.b, self.a)
    }

    fn mean(&self) -> Option<f64> {
        Some(self.a / (self.a + self.b))
    }

    fn profile(&self) -> RvProfile {
        let g = -1.0 / self.b;
        RvProfile {
            branch: branch_of(g),
            params: RvParams { gamma: g, rho: g, eta: g },
            form: LimitForm::PowerRatio,
            aux: Auxiliary::Hall(self.gap_hall()),
        }
    }
}
