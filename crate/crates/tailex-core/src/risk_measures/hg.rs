//! Haezendonck–Goovaerts measure: `H_q ≈ c0 F^←(q)(1 + c1 ε + c2 ε² + c3 ε ψ + c4 ε β)`.

use crate::error::{domain, unsupported, Result};
use crate::rv_kernel::d_kernel_log;
use crate::tail_models::{Branch, RvProfile, TailModel};
use crate::weyl_engine::xi;

/// Coefficients of the H-G expansion. `ε = A(t)`, `ψ = B(t)` and `β` is the drift of `A`,
/// all at `t = 1/(1-q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HgCoeffs {
    pub kappa: f64,
    pub gamma: f64,
    pub rho: f64,
    pub eta: f64,
    /// `c̄`: the balance point `x*` sits at `U(c̄ t)` to first order.
    pub c_bar: f64,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    /// Coefficient of `ε ψ`.
    pub c3: f64,
    /// Coefficient of `ε β`.
    pub c4: f64,
    /// `Δ_κ`
    pub delta: f64,
    /// `M̃_{κ,1}`
    pub m_tilde: f64,
    /// `Λ_κ = κ M_{κ-1,2}/L_{κ-1}`
    pub lambda: f64,
}

// Below this |ρ| the closed forms are evaluated at -h, -2h, -4h and extrapolated.
const RHO_CUTOFF: f64 = 1e-3;

/// `ξ_{k,r}/ξ_{k,0}`; one for `k = 0`.
fn xi_ratio(k: f64, g: f64, r: f64) -> Result<f64> {
    if k == 0.0 {
        return Ok(1.0);
    }
    Ok(xi(k, g, r)? / xi(k, g, 0.0)?)
}

fn generic(kappa: f64, g: f64, rho: f64, eta: f64) -> Result<HgCoeffs> {
    let k = kappa;
    let rr = |kk: f64, r: f64| xi_ratio(kk, g, r);
    let cb = k * libm::pow((1.0 - k * g) / (k * g.abs()), k) * xi(k, g, 0.0)?;
    let c0 = libm::pow(cb, g) / (1.0 - k * g);
    let r1 = rr(k, rho)?;
    let r1m = rr(k - 1.0, rho)?;
    let c1 = (libm::pow(cb, rho) * r1 - 1.0) / rho;
    let m1 = |r: f64| (r - 1.0) / (g * rho);
    let mt = m1(r1) - m1(r1m);
    let dl = (k * r1m - (k - 1.0) * r1 - 1.0) / (g * rho);
    let m2 = ((1.0 - g - 2.0 * rho) * rr(k, 2.0 * rho)? - 2.0 * (1.0 - g - rho) * r1 + 1.0 - g) / (2.0 * g * g * rho * rho);
    let m2_prev = if k == 1.0 {
        0.0
    } else {
        ((1.0 - g - 2.0 * rho) * rr(k - 1.0, 2.0 * rho)? - 2.0 * (1.0 - g - rho) * r1m + 1.0 - g) / (2.0 * g * g * rho * rho)
    };
    let cr = libm::pow(cb, rho);
    let c2 = g * cr * cr
        * (m2 + dl * (k * (g + rho) * mt + (rho + (g - 1.0) / 2.0) * dl + 1.0 / g)
            + k * mt * ((k - 1.0) / 2.0 * mt - m1(r1m)))
        + cr * (cr - 1.0) / (rho * rho) * (r1 - 1.0);
    let se = rho + eta;
    let c3 = (libm::pow(cb, se) * rr(k, se)? - 1.0) / se;
    let c4 = cr * d_kernel_log(libm::log(cb), eta) * (r1 - 1.0) / rho;
    Ok(HgCoeffs { kappa, gamma: g, rho, eta, c_bar: cb, c0, c1, c2, c3, c4, delta: dl, m_tilde: mt, lambda: k * m2_prev })
}

/// Coefficients for a profile with `γ ≠ 0`, `κ ≥ 1` and `κγ < 1`.
pub fn hg_coeffs(profile: &RvProfile, kappa: f64) -> Result<HgCoeffs> {
    let p = profile.params;
    let (g, rho, eta) = (p.gamma, p.rho, p.eta);
    if g == 0.0 {
        return Err(unsupported("H-G expansion needs γ ≠ 0"));
    }
    if !(kappa >= 1.0) {
        return Err(domain(alloc::format!("H-G measure needs κ ≥ 1, got {kappa}")));
    }
    if g > 0.0 && !(kappa * g < 1.0) {
        return Err(crate::error::Error::Divergent(alloc::format!(
            "partial moment diverges: κγ = {} must stay below 1",
            kappa * g
        )));
    }
    if rho.abs() >= RHO_CUTOFF {
        return generic(kappa, g, rho, eta);
    }
    // Quadratic extrapolation in ρ from the nodes -h, -2h, -4h (error O(h³)).
    let h = RHO_CUTOFF;
    let f1 = generic(kappa, g, -h, eta)?;
    let f2 = generic(kappa, g, -2.0 * h, eta)?;
    let f4 = generic(kappa, g, -4.0 * h, eta)?;
    let (x1, x2, x3) = (-h, -2.0 * h, -4.0 * h);
    let w1 = (rho - x2) * (rho - x3) / ((x1 - x2) * (x1 - x3));
    let w2 = (rho - x1) * (rho - x3) / ((x2 - x1) * (x2 - x3));
    let w3 = (rho - x1) * (rho - x2) / ((x3 - x1) * (x3 - x2));
    let ex = |a: f64, b: f64, c: f64| w1 * a + w2 * b + w3 * c;
    Ok(HgCoeffs {
        kappa,
        gamma: g,
        rho,
        eta,
        c_bar: f1.c_bar,
        c0: f1.c0,
        c1: ex(f1.c1, f2.c1, f4.c1),
        c2: ex(f1.c2, f2.c2, f4.c2),
        c3: ex(f1.c3, f2.c3, f4.c3),
        c4: ex(f1.c4, f2.c4, f4.c4),
        delta: ex(f1.delta, f2.delta, f4.delta),
        m_tilde: ex(f1.m_tilde, f2.m_tilde, f4.m_tilde),
        lambda: ex(f1.lambda, f2.lambda, f4.lambda),
    })
}

/// H-G approximation of the given order.
///
/// Fréchet: `c0 F^←(q)(series)`; Weibull: `x_F - c0 (x_F - F^←(q))(series)`.
pub fn hg_approx(model: &dyn TailModel, q: f64, kappa: f64, order: u8) -> Result<f64> {
    crate::weyl_engine::check_order(order)?;
    if !(q > 0.0 && q < 1.0) {
        return Err(domain(alloc::format!("q must lie in (0, 1), got {q}")));
    }
    let prof = model.profile();
    let c = hg_coeffs(&prof, kappa)?;
    let t = 1.0 / (1.0 - q);
    let eps = prof.second(t);
    let psi = prof.third(t).unwrap_or(0.0);
    let beta = prof.drift(t);
    let mut series = 1.0;
    if order >= 2 {
        series += c.c1 * eps;
    }
    if order >= 3 {
        series += eps * (c.c2 * eps + c.c3 * psi + c.c4 * beta);
    }
    match prof.branch {
        Branch::Frechet => Ok(c.c0 * model.upper_quantile(1.0 - q)? * series),
        Branch::Weibull => Ok(model.endpoint() - c.c0 * model.endpoint_gap(t)? * series),
        Branch::Gumbel => Err(unsupported("H-G expansion needs γ ≠ 0")),
    }
}

/// The series of [`hg_approx`] re-expanded in `s = (1-q)^{-ρ}` for a Hall-backed profile:
/// `H_q ≈ c0 F^←(q)(1 + first·s + second·s²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HgSeries {
    /// `-ρ`, the power of `1 - q` in `s`.
    pub exponent: f64,
    pub first: f64,
    pub second: f64,
}

pub fn hg_series(profile: &RvProfile, kappa: f64) -> Result<HgSeries> {
    let h = match profile.aux {
        crate::tail_models::Auxiliary::Hall(h) => h,
        crate::tail_models::Auxiliary::Exact => {
            return Ok(HgSeries { exponent: -profile.params.rho, first: 0.0, second: 0.0 });
        }
    };
    let k = hg_coeffs(profile, kappa)?;
    // A = ρcs - ρc²s² + O(s³), B = (2d/c)s, β = -ρcs.
    let (r, c, d) = (h.rho, h.c, h.d);
    let first = k.c1 * r * c;
    let second = k.c2 * r * r * c * c - k.c1 * r * c * c + 2.0 * r * d * k.c3 - k.c4 * r * r * c * c;
    Ok(HgSeries { exponent: -r, first, second })
}
