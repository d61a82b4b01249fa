use alloc::string::String;

use super::{branch_of, check_prob, Auxiliary, RvProfile, TailModel};
use crate::error::{Error, Result};
use crate::numerics::{beta, inc_beta_inv, inc_beta_pair};
use crate::rv_kernel::{HallFunction, LimitForm, RvParams};

/// Standard Student t with `v > 1` degrees of freedom.
///
/// `U ∈ 3RV_{1/v, -2/v, -2/v}`. Tail probabilities go through the regularized
/// incomplete beta function with both `z` and `1 - z` formed exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Student {
    pub v: f64,
    c_v: f64,
}

impl Student {
    pub fn new(v: f64) -> Result<Self> {
        if !(v > 1.0 && v.is_finite()) {
            return Err(Error::InvalidModel(alloc::format!(
                "student v must exceed 1 for a finite mean, got {v}"
            )));
        }
        let c_v = libm::pow(v, v / 2.0) / beta(v / 2.0, 0.5)?;
        Ok(Self { v, c_v })
    }

    /// `C_v = v^{v/2} / B(v/2, 1/2)`, so that `F̄(x) ~ (C_v/v) x^{-v}`.
    pub fn c_v(&self) -> f64 {
        self.c_v
    }

    /// `F̄(x) = (C_v/v) x^{-v}(1 - v²(v+1)/(2(v+2)) x^{-2} + v³(v+1)(v+3)/(8(v+4)) x^{-4} + ...)`.
    pub fn sf_hall(&self) -> HallFunction {
        let v = self.v;
        HallFunction {
            scale: self.c_v / v,
            alpha: -v,
            c: -v * v * (v + 1.0) / (2.0 * (v + 2.0)),
            d: v * v * v * (v + 1.0) * (v + 3.0) / (8.0 * (v + 4.0)),
            rho: -2.0,
        }
    }

    // P(T > |x|) and P(T < |x|) for the magnitude of x.
    fn split(&self, x: f64) -> (f64, f64) {
        let v = self.v;
        let x2 = x * x;
        if x2.is_infinite() {
            return (0.0, 1.0);
        }
        let z = v / (v + x2);
        let y = x2 / (v + x2);
        let (iz, iy) = inc_beta_pair(v / 2.0, 0.5, z, y).expect("valid shape parameters");
        (0.5 * iz, 0.5 + 0.5 * iy)
    }
}

impl TailModel for Student {
    fn name(&self) -> String {
        alloc::format!("student:v={}", self.v)
    }

    fn sf(&self, x: f64) -> f64 {
        let (upper, lower) = self.split(x);
        if x >= 0.0 {
            upper
        } else {
            lower
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        let (upper, lower) = self.split(x);
        if x >= 0.0 {
            lower
        } else {
            upper
        }
    }

    fn upper_quantile(&self, s: f64) -> Result<f64> {
        check_prob(s)?;
        if s == 0.0 {
            return Ok(f64::INFINITY);
        }
        if s == 1.0 {
            return Ok(f64::NEG_INFINITY);
        }
        if s > 0.5 {
            return Ok(-self.upper_quantile(1.0 - s)?);
        }
        let v = self.v;
        let p = 2.0 * s;
        let (z, y) = if p <= 0.5 {
            let z = inc_beta_inv(p, v / 2.0, 0.5)?;
            (z, 1.0 - z)
        } else {
            let y = inc_beta_inv(1.0 - p, 0.5, v / 2.0)?;
            (1.0 - y, y)
        };
        Ok(libm::sqrt(v * y / z))
    }

    fn endpoint(&self) -> f64 {
        f64::INFINITY
    }

    fn lower_endpoint(&self) -> f64 {
        f64::NEG_INFINITY
    }

    fn mean(&self) -> Option<f64> {
        Some(0.0)
    }

    fn profile(&self) -> RvProfile {
        let g = 1.0 / self.v;
        let r = -2.0 / self.v;
        let u = self.sf_hall().reciprocal_inverse().expect("Student survival exponent is negative");
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
        Some(RvProfile {
            branch: branch_of(1.0 / self.v),
            params: RvParams { gamma: -self.v, rho: -2.0, eta: -2.0 },
            form: LimitForm::PowerRatio,
            aux: Auxiliary::Hall(self.sf_hall()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let m = Student::new(1.2).unwrap();
        assert!((m.profile().params.gamma - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(m.mean(), Some(0.0));
        assert!((m.sf(0.0) - 0.5).abs() < 1e-15);
        assert!(Student::new(1.0).is_err());
    }

    #[test]
    fn two_degrees_of_freedom_closed_form() {
        // v = 2: F̄(x) = (1 - x/sqrt(2 + x²))/2 and C_2 = 1.
        let m = Student::new(2.0).unwrap();
        assert!((m.c_v() - 1.0).abs() < 1e-15);
        for &x in &[-3.0, -0.2, 0.7, 5.0, 1e4] {
            let r = libm::sqrt(2.0 + x * x);
            let want = if x > 0.0 { 1.0 / (r * (r + x)) } else { 0.5 * (1.0 - x / r) };
            assert!((m.sf(x) / want - 1.0).abs() < 1e-12, "{x}");
        }
        for &s in &[1e-12, 1e-6, 0.01, 0.3, 0.5, 0.8] {
            let want = (1.0 - 2.0 * s) / libm::sqrt(2.0 * s * (1.0 - s));
            let got = m.upper_quantile(s).unwrap();
            assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()), "{s} {got} {want}");
        }
    }

    #[test]
    fn auxiliaries_match_closed_forms() {
        let v = 3.0;
        let m = Student::new(v).unwrap();
        let p = m.profile();
        for &t in &[1e4, 1e8] {
            let w = libm::pow(m.c_v() * t / v, -2.0 / v);
            let big_a = (v + 1.0) * w / (v + 2.0 - v * (v + 1.0) * w / 2.0);
            let big_b = v * v * (v + 3.0) / (2.0 * (v + 2.0) * (v + 4.0)) * w;
            assert!((p.second(t) / big_a - 1.0).abs() < 1e-12);
            assert!((p.third(t).unwrap() / big_b - 1.0).abs() < 1e-12);
        }
    }
}
