use alloc::string::String;

use super::{branch_of, check_positive, check_prob, Auxiliary, RvProfile, TailModel};
use crate::error::{Error, Result};
use crate::numerics::{find_root, RootSpec};
use crate::rv_kernel::{HallFunction, LimitForm, RvParams};

/// Third-order Hall class `F̄(x) = b x^{-α}(1 + c x^ϱ + d x^{2ϱ})`, taken literally on
/// `[x_min, ∞)` and equal to one below `x_min`, where `x_min` is the largest solution
/// of `F̄(x) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HallModel {
    pub b: f64,
    pub alpha: f64,
    pub c: f64,
    pub d: f64,
    pub varrho: f64,
    x_min: f64,
}

impl HallModel {
    pub fn new(b: f64, alpha: f64, c: f64, d: f64, varrho: f64) -> Result<Self> {
        check_positive("hall b", b)?;
        check_positive("hall alpha", alpha)?;
        if !(varrho < 0.0 && varrho.is_finite()) || !c.is_finite() || !d.is_finite() {
            return Err(Error::InvalidModel(alloc::format!(
                "hall needs finite c, d and varrho < 0, got c={c}, d={d}, varrho={varrho}"
            )));
        }
        let mut m = Self { b, alpha, c, d, varrho, x_min: 0.0 };
        m.x_min = m.locate_x_min()?;
        Ok(m)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn sf_hall(&self) -> HallFunction {
        HallFunction { scale: self.b, alpha: -self.alpha, c: self.c, d: self.d, rho: self.varrho }
    }

    fn raw_sf(&self, x: f64) -> f64 {
        self.sf_hall().eval(x)
    }

    // Sign of x F̄'(x) / F̄_lead(x) as a quadratic in s = x^ϱ.
    fn slope(&self, s: f64) -> f64 {
        let (a, r) = (self.alpha, self.varrho);
        -a + (r - a) * self.c * s + (2.0 * r - a) * self.d * s * s
    }

    fn locate_x_min(&self) -> Result<f64> {
        let (a, r) = (self.alpha, self.varrho);
        // Start where the leading term is negligible and the corrections are tiny.
        let mut lx = ((libm::log(self.b) + 80.0) / a).max(libm::log(1e-6) / r).max(0.0);
        let non_monotone = || {
            Error::InvalidModel(alloc::format!(
                "hall survival function b={}, alpha={}, c={}, d={}, varrho={} is not monotone above the point where it reaches 1",
                self.b, self.alpha, self.c, self.d, self.varrho
            ))
        };
        let step = core::f64::consts::LN_2 / 8.0;
        let mut prev = lx;
        for _ in 0..40_000 {
            let x = libm::exp(lx);
            let s = libm::pow(x, r);
            if self.slope(s) >= 0.0 {
                return Err(non_monotone());
            }
            if self.raw_sf(x) >= 1.0 {
                let root = find_root(
                    |y| self.raw_sf(libm::exp(y)) - 1.0,
                    &RootSpec::new(lx, prev).with_rel_tol(1e-15).with_abs_tol(1e-15),
                )?;
                let xm = libm::exp(root);
                // The slope quadratic must stay negative on (0, x_min^ϱ].
                let smax = libm::pow(xm, r);
                let mut ok = self.slope(smax) < 0.0;
                if self.d != 0.0 {
                    let vertex = -(r - a) * self.c / (2.0 * (2.0 * r - a) * self.d);
                    if vertex > 0.0 && vertex < smax {
                        ok &= self.slope(vertex) < 0.0;
                    }
                }
                return if ok { Ok(xm) } else { Err(non_monotone()) };
            }
            prev = lx;
            lx -= step;
        }
        Err(non_monotone())
    }
}

impl TailModel for HallModel {
    fn name(&self) -> String {
        alloc::format!(
            "hall:b={},alpha={},c={},d={},varrho={}",
            self.b, self.alpha, self.c, self.d, self.varrho
        )
    }

    fn sf(&self, x: f64) -> f64 {
        if x <= self.x_min {
            return 1.0;
        }
        self.raw_sf(x)
    }

    fn cdf(&self, x: f64) -> f64 {
        1.0 - self.sf(x)
    }

    fn upper_quantile(&self, s: f64) -> Result<f64> {
        check_prob(s)?;
        if s == 0.0 {
            return Ok(f64::INFINITY);
        }
        if s >= 1.0 {
            return Ok(self.x_min);
        }
        // ln F̄ is strictly decreasing in ln x on [ln x_min, ∞).
        let target = libm::log(s);
        let f = |y: f64| libm::log(self.raw_sf(libm::exp(y))) - target;
        let lo = libm::log(self.x_min);
        let mut hi = (libm::log(self.b) - target) / self.alpha;
        hi = hi.max(lo + 1.0);
        while f(hi) > 0.0 {
            hi += 1.0 + (hi - lo);
        }
        let y = find_root(f, &RootSpec::new(lo, hi).with_rel_tol(1e-16).with_abs_tol(1e-15))?;
        Ok(libm::exp(y))
    }

    fn endpoint(&self) -> f64 {
        f64::INFINITY
    }

    fn lower_endpoint(&self) -> f64 {
        self.x_min
    }

    fn mean(&self) -> Option<f64> {
        let (a, r) = (self.alpha, self.varrho);
        if a <= 1.0 {
            return None;
        }
        let x = self.x_min;
        let tail = |e: f64| libm::pow(x, 1.0 - a + e) / (a - 1.0 - e);
        Some(x + self.b * (tail(0.0) + self.c * tail(r) + self.d * tail(2.0 * r)))
    }

    fn profile(&self) -> RvProfile {
        let g = 1.0 / self.alpha;
        let r = self.varrho / self.alpha;
        let u = self.sf_hall().reciprocal_inverse().expect("Hall survival exponent is negative");
        RvProfile {
            branch: branch_of(g),
            params: RvParams { gamma: g, rho: r, eta: r },
            form: LimitForm::PowerRatio,
            aux: if self.c == 0.0 { Auxiliary::Exact } else { Auxiliary::Hall(u) },
        }
    }

    fn survival_hall(&self) -> Option<HallFunction> {
        Some(self.sf_hall())
    }

    fn sf_profile(&self) -> Option<RvProfile> {
        Some(RvProfile {
            branch: branch_of(1.0 / self.alpha),
            params: RvParams { gamma: -self.alpha, rho: self.varrho, eta: self.varrho },
            form: LimitForm::PowerRatio,
            aux: if self.c == 0.0 { Auxiliary::Exact } else { Auxiliary::Hall(self.sf_hall()) },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pareto_quantile_is_exact() {
        let m = HallModel::new(1.0, 3.0, 0.0, 0.0, -1.0).unwrap();
        assert!((m.x_min() - 1.0).abs() < 1e-14);
        for &t in &[2.0, 1e3, 1e9] {
            let u = m.tail_quantile(t).unwrap();
            assert!((u / libm::cbrt(t) - 1.0).abs() < 1e-13);
        }
        assert!(m.profile().is_exact());
        assert!((m.mean().unwrap() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_monotone() {
        assert!(matches!(HallModel::new(1.0, 1.0, -10.0, 0.0, -0.5), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn generic_auxiliaries() {
        let m = HallModel::new(1.0, 3.0, 0.5, 0.1, -1.0).unwrap();
        let p = m.sf_profile().unwrap();
        let x = 50.0;
        assert!((p.second(x) - (-0.5 / x) / (1.0 + 0.5 / x)).abs() < 1e-16);
        assert!((p.third(x).unwrap() - 0.4 / x).abs() < 1e-16);
        let u = m.tail_quantile(1e6).unwrap();
        assert!((m.sf(u) * 1e6 - 1.0).abs() < 1e-12);
    }
}
