use alloc::string::String;

use super::{check_positive, check_prob, Auxiliary, Branch, RvProfile, TailModel};
use crate::error::Result;
use crate::rv_kernel::{LimitForm, RvParams};

/// Exponential with rate `λ`: `U(t) = ln t / λ`, `a ≡ 1/λ`, and all higher-order
/// corrections vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponential {
    pub rate: f64,
}

impl Exponential {
    pub fn new(rate: f64) -> Result<Self> {
        check_positive("exponential rate", rate)?;
        Ok(Self { rate })
    }
}

impl TailModel for Exponential {
    fn name(&self) -> String {
        alloc::format!("exponential:rate={}", self.rate)
    }

    fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            libm::exp(-self.rate * x)
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -libm::expm1(-self.rate * x)
        }
    }

    fn upper_quantile(&self, s: f64) -> Result<f64> {
        check_prob(s)?;
        Ok(-libm::log(s) / self.rate)
    }

    fn endpoint(&self) -> f64 {
        f64::INFINITY
    }

    fn lower_endpoint(&self) -> f64 {
        0.0
    }

    fn mean(&self) -> Option<f64> {
        Some(1.0 / self.rate)
    }

    fn profile(&self) -> RvProfile {
        RvProfile {
            branch: Branch::Gumbel,
            params: RvParams { gamma: 0.0, rho: 0.0, eta: 0.0 },
            form: LimitForm::Extended,
            aux: Auxiliary::Exact,
        }
    }

    fn first_aux(&self, _t: f64) -> Result<f64> {
        Ok(1.0 / self.rate)
    }
}
