//! Gumbel and Weibull cases: `γ ≤ 0` for the risk and `Ḡ(1 - 1/x) ∈ 3RV_{-α,ϱ,ς}` for
//! the scaler.

use alloc::vec::Vec;

use crate::error::{domain, unsupported, Error, Result};
use crate::numerics::{integrate, QuadratureSpec, Transform};
use crate::rv_kernel::{d_kernel_log, LimitForm, RvParams};
use crate::scalers::{Scaler, ScalerTail};
use crate::tail_models::{Branch, RvProfile, TailModel};

use super::{check_order, Expansion};

/// `φ_t` below this value flags the expansion as pre-asymptotic.
pub const PRE_ASYMPTOTIC_PHI: f64 = 10.0;

/// Integrals over `s ∈ (0, 1)` of powers of `D_γ(1/s)` against the limit kernels.
///
/// With `D = D_γ(1/s)`, `H`, `R` the profile's second- and third-order kernels at `1/s`
/// and `c_{α,l}` the generalised binomial coefficient:
/// `L_p = ∫ D^p`, `M_{p,l} = c_{p,l} ∫ D^{p-l} H^l`,
/// `N_{p,l,r} = c_{p,l} ∫ D^{p-l} H^l (D^{-r} - 1)/r`, `Q = α ∫ D^{α-1} R`
/// and `K = ∫ D^{α-ϱ-1} H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GwConstants {
    pub alpha: f64,
    pub varrho: f64,
    pub varsigma: f64,
    /// `L_α`
    pub l_alpha: f64,
    /// `L_{α+1}`
    pub l_alpha1: f64,
    /// `L_{α+2}`
    pub l_alpha2: f64,
    /// `L_{α-ϱ+1}`
    pub l_shift: f64,
    /// `M_{α,1}`
    pub m1: f64,
    /// `M_{α,2}`
    pub m2: f64,
    /// `M_{α+1,1}`
    pub m_alpha1_1: f64,
    /// `N_{α,0,ϱ}`
    pub n0: f64,
    /// `N_{α,1,ϱ}`
    pub n1: f64,
    /// `N_{α+1,0,ϱ}`
    pub n_alpha1_0: f64,
    /// `N_{α,0,ϱ+ς}`
    pub n0_shift: f64,
    /// `Q_α`
    pub q: f64,
    /// `K`
    pub k: f64,
}

impl GwConstants {
    /// `(symbol, value)` pairs in a fixed order.
    pub fn labeled(&self) -> Vec<(&'static str, f64)> {
        alloc::vec![
            ("L_α", self.l_alpha),
            ("L_{α+1}", self.l_alpha1),
            ("L_{α+2}", self.l_alpha2),
            ("L_{α-ϱ+1}", self.l_shift),
            ("M_{α,1}", self.m1),
            ("M_{α,2}", self.m2),
            ("M_{α+1,1}", self.m_alpha1_1),
            ("N_{α,0,ϱ}", self.n0),
            ("N_{α,1,ϱ}", self.n1),
            ("N_{α+1,0,ϱ}", self.n_alpha1_0),
            ("N_{α,0,ϱ+ς}", self.n0_shift),
            ("Q_α", self.q),
            ("K", self.k),
        ]
    }
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default().with_tol(1e-11, 1e-13)
}

/// `∫_0^1 g(ln(1/s)) ds = ∫_0^∞ g(u) e^{-u} du`, split at `u = 1`.
fn over_unit<F: Fn(f64) -> f64>(g: F) -> Result<f64> {
    let f = |u: f64| {
        let v = g(u);
        if v == 0.0 {
            0.0
        } else {
            v * libm::exp(-u)
        }
    };
    let head = integrate(f, 0.0, 1.0, &spec().with_transform(Transform::ExpSub));
    let tail = integrate(f, 1.0, f64::INFINITY, &spec().with_transform(Transform::SemiInfinite { scale: 1.0 }));
    match (head, tail) {
        (Ok(h), Ok(t)) => Ok(h.value + t.value),
        (Err(e), _) | (_, Err(e)) => Err(match e {
            Error::Quadrature { .. } | Error::NonFinite { .. } => {
                Error::Divergent(alloc::format!("constant integral did not converge ({e})"))
            }
            other => other,
        }),
    }
}

fn pow(x: f64, p: f64) -> f64 {
    if x <= 0.0 {
        return if p == 0.0 { 1.0 } else { 0.0 };
    }
    libm::pow(x, p)
}

/// `(D^{-r} - 1)/r`, `-ln D` at `r = 0`.
fn shift(dv: f64, r: f64) -> f64 {
    -d_kernel_log(libm::log(dv), -r)
}

/// Constants for risk index `γ ≤ 0` (with `ρ, η` and the kernel form of the risk profile)
/// and scaler tail `(α, ϱ, ς)`.
pub fn gw_constants(p: RvParams, form: LimitForm, alpha: f64, varrho: f64, varsigma: f64) -> Result<GwConstants> {
    if !(p.gamma <= 0.0) {
        return Err(domain(alloc::format!("these constants need γ ≤ 0, got {}", p.gamma)));
    }
    if !(alpha > 0.0) {
        return Err(domain(alloc::format!("scaler tail index must be positive, got {alpha}")));
    }
    if !(varrho <= 0.0 && varsigma <= 0.0) {
        return Err(domain("scaler second- and third-order indices must be non-positive"));
    }
    let g = p.gamma;
    let d = move |u: f64| d_kernel_log(u, g);
    let h = move |u: f64| form.h_log(u, p);
    let r = move |u: f64| form.r_log(u, p);
    let l_p = |e: f64| over_unit(|u| pow(d(u), e));
    let m_p1 = |e: f64| over_unit(|u| e * pow(d(u), e - 1.0) * h(u));
    let n_p0 = |e: f64, s: f64| over_unit(|u| {
        let dv = d(u);
        if dv <= 0.0 {
            return 0.0;
        }
        pow(dv, e) * shift(dv, s)
    });
    Ok(GwConstants {
        alpha,
        varrho,
        varsigma,
        l_alpha: l_p(alpha)?,
        l_alpha1: l_p(alpha + 1.0)?,
        l_alpha2: l_p(alpha + 2.0)?,
        l_shift: l_p(alpha - varrho + 1.0)?,
        m1: m_p1(alpha)?,
        m2: over_unit(|u| {
            let hv = h(u);
            alpha * (alpha - 1.0) / 2.0 * pow(d(u), alpha - 2.0) * hv * hv
        })?,
        m_alpha1_1: m_p1(alpha + 1.0)?,
        n0: n_p0(alpha, varrho)?,
        n1: over_unit(|u| {
            let dv = d(u);
            if dv <= 0.0 {
                return 0.0;
            }
            alpha * pow(dv, alpha - 1.0) * h(u) * shift(dv, varrho)
        })?,
        n_alpha1_0: n_p0(alpha + 1.0, varrho)?,
        n0_shift: n_p0(alpha, varrho + varsigma)?,
        q: over_unit(|u| alpha * pow(d(u), alpha - 1.0) * r(u))?,
        k: over_unit(|u| pow(d(u), alpha - varrho - 1.0) * h(u))?,
    })
}

/// Precomputed constants for repeated evaluation of [`gw_expand`] at many `x`.
pub struct GwPlan<'a> {
    pub model: &'a dyn TailModel,
    pub profile: RvProfile,
    pub tail: ScalerTail,
    pub scaler: Scaler,
    pub kappa: f64,
    pub constants: GwConstants,
}

impl<'a> GwPlan<'a> {
    pub fn new(model: &'a dyn TailModel, scaler: &Scaler, kappa: f64) -> Result<Self> {
        let profile = model.profile();
        if profile.branch == Branch::Frechet {
            return Err(unsupported("Fréchet-domain models use the Fréchet expansion"));
        }
        let tail = scaler
            .tail()
            .ok_or_else(|| unsupported("scaler needs a regularly varying tail near one"))?;
        if !(tail.varrho < 0.0 && tail.varsigma < 0.0) {
            return Err(domain("scaler second- and third-order indices must be negative"));
        }
        if !(kappa >= 0.0) {
            return Err(domain(alloc::format!("κ must be non-negative, got {kappa}")));
        }
        let constants = gw_constants(profile.params, profile.form, tail.alpha, tail.varrho, tail.varsigma)?;
        Ok(Self { model, profile, tail, scaler: *scaler, kappa, constants })
    }

    pub fn expand(&self, x: f64, order: u8) -> Result<Expansion> {
        check_order(order)?;
        let m = self.model;
        if !(x < m.endpoint()) {
            return Err(domain(alloc::format!("x = {x} is not below the right endpoint")));
        }
        if self.kappa != 0.0 && !(x > 0.0) {
            return Err(domain(alloc::format!("x must be positive when κ ≠ 0, got {x}")));
        }
        let sf = m.sf(x);
        if !(sf > 0.0) {
            return Err(domain(alloc::format!("F̄({x}) vanishes")));
        }
        let t = 1.0 / sf;
        let at = match self.profile.branch {
            Branch::Weibull => -self.profile.params.gamma * (m.endpoint() - x),
            _ => m.first_aux(t)?,
        };
        // U(t) = x for a continuous distribution function.
        let phi = x / at;
        let c = &self.constants;
        let k = self.kappa;
        let al = c.alpha;
        let a = self.profile.second(t);
        let b = self.profile.third(t).unwrap_or(0.0);
        let (at_, bt_) = if phi > 0.0 { (self.tail.second(phi), self.tail.third(phi)) } else { (0.0, 0.0) };
        let inv = 1.0 / phi;
        let lead = libm::pow(x, k) * sf * self.scaler.sf_near_one(inv) * c.l_alpha;
        let mut e = Expansion::new(lead, c.l_alpha, order);
        e.pre_asymptotic = !(phi >= PRE_ASYMPTOTIC_PHI);
        let ka = k - al;
        e.push("M_{α,1}·A(t)", 2, c.m1, a);
        e.push("N_{α,0,ϱ}·Ã(φ_t)", 2, c.n0, at_);
        e.push("(κ-α)L_{α+1}/φ_t", 2, ka * c.l_alpha1, inv);
        e.push("M_{α,2}·A²(t)", 3, c.m2, a * a);
        e.push("Q_α·A(t)B(t)", 3, c.q, a * b);
        e.push("(κ-α)M_{α+1,1}·A(t)/φ_t", 3, ka * c.m_alpha1_1, a * inv);
        e.push("(κ-α)(κ-α-1)L_{α+2}/(2φ_t²)", 3, ka * (ka - 1.0) * c.l_alpha2 / 2.0, inv * inv);
        e.push("N_{α,0,ϱ+ς}·Ã(φ_t)B̃(φ_t)", 3, c.n0_shift, at_ * bt_);
        e.push(
            "((κ-α)N_{α+1,0,ϱ}+L_{α-ϱ+1})·Ã(φ_t)/φ_t",
            3,
            ka * c.n_alpha1_0 + c.l_shift,
            at_ * inv,
        );
        e.push("(N_{α,1,ϱ}-K)·A(t)Ã(φ_t)", 3, c.n1 - c.k, a * at_);
        Ok(e)
    }
}

/// Expansion of `E[X^κ 1{SX>x}]` for a Gumbel- or Weibull-domain model.
pub fn gw_expand(model: &dyn TailModel, s: &Scaler, kappa: f64, x: f64, order: u8) -> Result<Expansion> {
    GwPlan::new(model, s, kappa)?.expand(x, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::beta;

    #[test]
    fn l_matches_closed_form() {
        // γ = -1/6, α = 2: L_2 = 2·B(7, 2)·6² = 9/7
        let p = RvParams::new(-1.0 / 6.0, -0.5, -0.5).unwrap();
        let c = gw_constants(p, LimitForm::PowerRatio, 2.0, -1.0, -1.0).unwrap();
        assert!((c.l_alpha - 9.0 / 7.0).abs() < 1e-10, "{}", c.l_alpha);
        assert!((2.0 * beta(7.0, 2.0).unwrap() * 36.0 - 9.0 / 7.0).abs() < 1e-13);
    }

    #[test]
    fn weibull_constants_reference() {
        // Beta(3, 6) risk with a Beta(3, 3) scaler; values from an independent
        // high-precision evaluation of the same integrals.
        let g = -1.0 / 6.0;
        let p = RvParams::new(g, g, g).unwrap();
        let c = gw_constants(p, LimitForm::PowerRatio, 3.0, -1.0, -1.0).unwrap();
        let want = [
            (c.l_alpha, 2.5714285714285716),
            (c.l_alpha1, 6.171428571428572),
            (c.l_alpha2, 16.83116883116883),
            (c.l_shift, 16.83116883116883),
            (c.m1, -27.771428571428572),
            (c.m2, 106.03636363636363),
            (c.m_alpha1_1, -80.78961038961039),
            (c.n0, -3.6),
            (c.n1, 32.82077922077922),
            (c.n_alpha1_0, -10.65974025974026),
            (c.n0_shift, -7.12987012987013),
            (c.q, -22.722077922077922),
            (c.k, -20.197402597402597),
        ];
        for (got, w) in want {
            assert!((got - w).abs() < 1e-9 * w.abs(), "{got} vs {w}");
        }
    }

    #[test]
    fn n_log_branch_is_continuous() {
        let p = RvParams::new(-0.5, -0.5, -0.5).unwrap();
        let a = gw_constants(p, LimitForm::PowerRatio, 1.5, -1e-6, -1.0).unwrap();
        let b = gw_constants(p, LimitForm::PowerRatio, 1.5, 0.0, -1.0).unwrap();
        assert!((a.n0 - b.n0).abs() < 1e-4 * b.n0.abs(), "{} {}", a.n0, b.n0);
    }

    #[test]
    fn deterministic() {
        let p = RvParams::new(-0.25, -0.5, -0.5).unwrap();
        let a = gw_constants(p, LimitForm::PowerRatio, 2.0, -1.0, -1.0).unwrap();
        let b = gw_constants(p, LimitForm::PowerRatio, 2.0, -1.0, -1.0).unwrap();
        assert_eq!(a, b);
    }
}
