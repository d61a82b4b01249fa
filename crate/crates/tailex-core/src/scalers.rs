//! Scaling factors `S ∈ (0, 1]`: moments, distribution function and the tail
//! profile of `x ↦ Ḡ(1 - 1/x)`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::numerics::{beta, digamma, inc_beta_pair, integrate, ln_beta, QuadratureSpec, Transform};
use crate::rv_kernel::HallFunction;

/// Distribution of the scaling factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scaler {
    /// `S ~ Beta(a, b)`; `Beta(1, 1)` is the uniform scaler.
    Beta { a: f64, b: f64 },
    /// `S ≡ 1`.
    Unit,
}

/// `Ḡ(1 - 1/x) ∈ 3RV_{-α, ϱ, ς}` with Hall-form auxiliaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalerTail {
    pub alpha: f64,
    pub varrho: f64,
    pub varsigma: f64,
    /// `Ḡ(1 - 1/x) = scale · x^{-α}(1 + c/x + d/x² + ...)`.
    pub hall: HallFunction,
}

impl ScalerTail {
    /// `Ã(x)`.
    pub fn second(&self, x: f64) -> f64 {
        self.hall.auxiliaries().second(x)
    }

    /// `B̃(x)`; zero when the tail is an exact power.
    pub fn third(&self, x: f64) -> f64 {
        self.hall.auxiliaries().third(x).unwrap_or(0.0)
    }

    pub fn is_exact(&self) -> bool {
        self.hall.auxiliaries().exact
    }
}

impl Scaler {
    pub fn beta(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidModel(alloc::format!(
                "beta scaler needs positive finite shapes, got ({a}, {b})"
            )));
        }
        Ok(Scaler::Beta { a, b })
    }

    pub fn uniform() -> Self {
        Scaler::Beta { a: 1.0, b: 1.0 }
    }

    pub fn name(&self) -> String {
        match *self {
            Scaler::Beta { a, b } if a == 1.0 && b == 1.0 => String::from("uniform"),
            Scaler::Beta { a, b } => alloc::format!("beta:a={a},b={b}"),
            Scaler::Unit => String::from("unit"),
        }
    }

    /// `G(s) = P(S ≤ s)`.
    pub fn cdf(&self, s: f64) -> f64 {
        match *self {
            Scaler::Unit => {
                if s >= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Scaler::Beta { a, b } => {
                if s <= 0.0 {
                    0.0
                } else if s >= 1.0 {
                    1.0
                } else {
                    inc_beta_pair(a, b, s, 1.0 - s).expect("valid shapes").0
                }
            }
        }
    }

    /// `P(S > 1 - h)` for `h ∈ [0, 1]`, accurate for small `h`.
    pub fn sf_near_one(&self, h: f64) -> f64 {
        match *self {
            Scaler::Unit => {
                if h > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Scaler::Beta { a, b } => {
                if h <= 0.0 {
                    0.0
                } else if h >= 1.0 {
                    1.0
                } else {
                    inc_beta_pair(b, a, h, 1.0 - h).expect("valid shapes").0
                }
            }
        }
    }

    /// Density of `S`; `None` for the point mass.
    pub fn pdf(&self, s: f64) -> Option<f64> {
        match *self {
            Scaler::Unit => None,
            Scaler::Beta { .. } => {
                if s <= 0.0 || s >= 1.0 {
                    return Some(0.0);
                }
                Some(self.density_split(s, 1.0 - s))
            }
        }
    }

    /// Density at `s` given both `s` and `1 - s`, so neither end loses digits.
    pub fn density_split(&self, s: f64, one_minus_s: f64) -> f64 {
        match *self {
            Scaler::Unit => 0.0,
            Scaler::Beta { a, b } => {
                let lb = ln_beta(a, b).expect("valid shapes");
                libm::exp((a - 1.0) * libm::log(s) + (b - 1.0) * libm::log(one_minus_s) - lb)
            }
        }
    }

    /// `E[S^l]` for `l ≥ 0`.
    pub fn moment(&self, l: f64) -> Result<f64> {
        if !(l >= 0.0) {
            return Err(domain(alloc::format!("scaler moments need a non-negative exponent, got {l}")));
        }
        match *self {
            Scaler::Unit => Ok(1.0),
            Scaler::Beta { a, b } => {
                if l == 0.0 {
                    return Ok(1.0);
                }
                if a + l + b < 150.0 {
                    return Ok(beta(a + l, b)? / beta(a, b)?);
                }
                Ok(libm::exp(ln_beta(a + l, b)? - ln_beta(a, b)?))
            }
        }
    }

    /// `d/dl E[S^l] = E[S^l ln S]`.
    pub fn moment_slope(&self, l: f64) -> Result<f64> {
        match *self {
            Scaler::Unit => Ok(0.0),
            Scaler::Beta { a, b } => Ok(self.moment(l)? * (digamma(a + l)? - digamma(a + b + l)?)),
        }
    }

    /// `E[S^l]` by quadrature of `∫ s^l dG(s)`; an independent check of [`Scaler::moment`].
    pub fn moment_by_quadrature(&self, l: f64) -> Result<f64> {
        if !(l >= 0.0) {
            return Err(domain(alloc::format!("scaler moments need a non-negative exponent, got {l}")));
        }
        match *self {
            Scaler::Unit => Ok(1.0),
            Scaler::Beta { .. } => {
                let spec = QuadratureSpec::default().with_tol(1e-12, 1e-15).with_transform(Transform::ExpSub);
                let f = |s: f64, h: f64| if s > 0.0 && h > 0.0 { libm::pow(s, l) * self.density_split(s, h) } else { 0.0 };
                let lower = integrate(|s: f64| f(s, 1.0 - s), 0.0, 0.5, &spec)?;
                let upper = integrate(|h: f64| f(1.0 - h, h), 0.0, 0.5, &spec)?;
                Ok(lower.value + upper.value)
            }
        }
    }

    /// Batch version of [`Scaler::moment`].
    pub fn moment_vector(&self, exponents: &[f64]) -> Result<Vec<f64>> {
        exponents.iter().map(|&l| self.moment(l)).collect()
    }

    /// Tail profile of `Ḡ(1 - 1/x)`; `None` for the point mass at one.
    ///
    /// For `Beta(a, b)`: `Ḡ(1 - 1/x) = x^{-b}/(b B(a,b)) (1 - b(a-1)/(b+1) x^{-1}
    /// + b(a-1)(a-2)/(2(b+2)) x^{-2} + ...)`, so `α = b` and `ϱ = ς = -1`. For `a = 1`
    /// the tail is an exact power and `Ã ≡ 0`.
    pub fn tail(&self) -> Option<ScalerTail> {
        match *self {
            Scaler::Unit => None,
            Scaler::Beta { a, b } => {
                let c = -b * (a - 1.0) / (b + 1.0);
                let d = b * (a - 1.0) * (a - 2.0) / (2.0 * (b + 2.0));
                let scale = 1.0 / (b * beta(a, b).ok()?);
                let hall = HallFunction { scale, alpha: -b, c, d, rho: -1.0 };
                Some(ScalerTail { alpha: b, varrho: -1.0, varsigma: -1.0, hall })
            }
        }
    }
}
