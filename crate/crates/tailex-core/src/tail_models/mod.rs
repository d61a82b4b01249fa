//! Risk distributions with exact distribution functions and hand-derived
//! third-order regular-variation profiles.

mod beta;
mod burr;
mod exponential;
mod hall;
mod student;

use alloc::string::String;

pub use beta::BetaModel;
pub use burr::Burr;
pub use exponential::Exponential;
pub use hall::HallModel;
pub use student::Student;

use crate::error::{domain, Result};
use crate::rv_kernel::{d_kernel_log, HallFunction, LimitForm, RvParams};

/// Max-domain of attraction of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `γ > 0`; `U ∈ 3RV_{γ,ρ,η}`.
    Frechet,
    /// `γ = 0`; `U ∈ 3ERV_{0,ρ,η}`.
    Gumbel,
    /// `γ < 0`; `x_F - U ∈ 3RV_{γ,ρ,η}`.
    Weibull,
}

/// How the second- and third-order auxiliary functions are produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Auxiliary {
    /// `A ≡ 0`: every correction term vanishes.
    Exact,
    /// Auxiliaries of the Hall representation of the profiled function.
    Hall(HallFunction),
}

/// Third-order regular-variation profile.
///
/// For `Frechet` the profiled function is `U`, for `Weibull` it is `x_F - U`; for the
/// survival-scale profile returned by [`TailModel::sf_profile`] it is `F̄` itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RvProfile {
    pub branch: Branch,
    pub params: RvParams,
    pub form: LimitForm,
    pub aux: Auxiliary,
}

impl RvProfile {
    /// Second-order auxiliary `A(t)`.
    pub fn second(&self, t: f64) -> f64 {
        match self.aux {
            Auxiliary::Exact => 0.0,
            Auxiliary::Hall(h) => h.auxiliaries().second(t),
        }
    }

    /// Third-order auxiliary `B(t)`; `None` when the profile has no third-order term.
    pub fn third(&self, t: f64) -> Option<f64> {
        match self.aux {
            Auxiliary::Exact => None,
            Auxiliary::Hall(h) => h.auxiliaries().third(t),
        }
    }

    /// `β(t)` with `A(tx)/A(t) ≈ x^ρ (1 + β(t) D_ρ(x))`.
    pub fn drift(&self, t: f64) -> f64 {
        match self.aux {
            Auxiliary::Exact => 0.0,
            Auxiliary::Hall(h) => h.auxiliaries().drift(t),
        }
    }

    pub fn is_exact(&self) -> bool {
        match self.aux {
            Auxiliary::Exact => true,
            Auxiliary::Hall(h) => h.auxiliaries().exact,
        }
    }

    /// Leading constant `C` in `f(t) = C t^γ (1 + ...)` for Hall-backed profiles.
    pub fn hall_scale(&self) -> Option<f64> {
        match self.aux {
            Auxiliary::Exact => None,
            Auxiliary::Hall(h) => Some(h.scale),
        }
    }
}

pub(crate) fn branch_of(gamma: f64) -> Branch {
    if gamma > 0.0 {
        Branch::Frechet
    } else if gamma < 0.0 {
        Branch::Weibull
    } else {
        Branch::Gumbel
    }
}

/// A risk distribution with exact evaluation and a regular-variation profile.
pub trait TailModel: Send + Sync {
    /// Short specification string, e.g. `burr:a=2,b=1.5`.
    fn name(&self) -> String;

    /// `F̄(x) = P(X > x)`.
    fn sf(&self, x: f64) -> f64;

    /// `F(x) = P(X ≤ x)`.
    fn cdf(&self, x: f64) -> f64;

    /// `F^←(1 - s)`, computed from the exceedance probability `s` directly.
    fn upper_quantile(&self, s: f64) -> Result<f64>;

    /// `F^←(p)`.
    fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(domain(alloc::format!("probability {p} outside [0, 1]")));
        }
        self.upper_quantile(1.0 - p)
    }

    /// Tail quantile function `U(t) = F^←(1 - 1/t)`.
    fn tail_quantile(&self, t: f64) -> Result<f64> {
        if !(t >= 1.0) {
            return Err(domain(alloc::format!("tail quantile needs t >= 1, got {t}")));
        }
        self.upper_quantile(1.0 / t)
    }

    /// Right endpoint `x_F` (may be `+∞`).
    fn endpoint(&self) -> f64;

    /// Left end of the support (may be `-∞`).
    fn lower_endpoint(&self) -> f64;

    /// `x_F - U(t)`, accurate even when the difference is tiny.
    fn endpoint_gap(&self, t: f64) -> Result<f64> {
        Ok(self.endpoint() - self.tail_quantile(t)?)
    }

    /// `P(X > x_F - g)` for a finite endpoint, accurate for small `g`.
    fn sf_gap(&self, g: f64) -> f64 {
        self.sf(self.endpoint() - g)
    }

    /// `E[X]`, `None` when it does not exist.
    fn mean(&self) -> Option<f64>;

    /// Profile of `U` (Fréchet), `x_F - U` (Weibull) or `U` in extended form (Gumbel).
    fn profile(&self) -> RvProfile;

    /// Profile of `F̄` in the survival scale, when the model is in the Fréchet domain.
    fn sf_profile(&self) -> Option<RvProfile> {
        None
    }

    /// `F̄` as a Hall function `b x^{-α}(1 + c x^ϱ + d x^{2ϱ})`, when it has that form.
    fn survival_hall(&self) -> Option<HallFunction> {
        None
    }

    /// First-order auxiliary `a(t)`.
    fn first_aux(&self, t: f64) -> Result<f64> {
        let p = self.profile();
        match p.branch {
            Branch::Frechet => Ok(p.params.gamma * self.tail_quantile(t)?),
            Branch::Weibull => Ok(-p.params.gamma * self.endpoint_gap(t)?),
            Branch::Gumbel => Err(crate::error::unsupported("Gumbel models must supply a(t)")),
        }
    }

    /// `(U(tx) - U(t))/a(t) - D_γ(x)`.
    fn first_excess(&self, t: f64, x: f64) -> Result<f64> {
        let g = self.profile().params.gamma;
        let lead = (self.tail_quantile(t * x)? - self.tail_quantile(t)?) / self.first_aux(t)?;
        Ok(lead - d_kernel_log(libm::log(x), g))
    }
}

/// Adapter exposing a model's tail quantile function to the Drees checker.
pub struct QuantileTriple<'a>(pub &'a dyn TailModel);

impl crate::rv_kernel::DreesTriple for QuantileTriple<'_> {
    fn first_excess(&self, t: f64, x: f64) -> f64 {
        self.0.first_excess(t, x).unwrap_or(f64::NAN)
    }
    fn second(&self, t: f64) -> f64 {
        self.0.profile().second(t)
    }
    fn third(&self, t: f64) -> f64 {
        self.0.profile().third(t).unwrap_or(0.0)
    }
}

pub(crate) fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(crate::error::Error::InvalidModel(alloc::format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

pub(crate) fn check_prob(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(domain(alloc::format!("probability {s} outside [0, 1]")));
    }
    Ok(())
}
