//! Partial moments `E[(X - U(t))_+^κ]`, equivalently a `Beta(1, κ)` scaler.

use crate::error::{domain, unsupported, Error, Result};
use crate::numerics::{beta, integrate, QuadratureSpec, Transform};
use crate::rv_kernel::exp_divided_difference;
use crate::tail_models::{Branch, RvProfile, TailModel};

use super::{check_order, Expansion};

/// Below this the ρ-differences of `ξ` are taken by quadrature instead of Beta values,
/// which lose about `eps/|ρ|²` to cancellation.
const DIFF_CUTOFF: f64 = 1e-3;

/// `ξ_{κ,r} = B((1-r)/γ - κ, κ)` for `γ > 0` and `B(1 - (1-r)/γ, κ)` for `γ < 0`.
pub fn xi(kappa: f64, gamma: f64, r: f64) -> Result<f64> {
    beta(xi_shape(kappa, gamma, r)?, kappa)
}

fn xi_shape(kappa: f64, gamma: f64, r: f64) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(domain(alloc::format!("κ must be positive, got {kappa}")));
    }
    let a = if gamma > 0.0 {
        (1.0 - r) / gamma - kappa
    } else if gamma < 0.0 {
        1.0 - (1.0 - r) / gamma
    } else {
        return Err(unsupported("ξ is defined for γ ≠ 0"));
    };
    if !(a > 0.0) {
        return Err(Error::Divergent(alloc::format!(
            "partial moment diverges: κγ = {} must stay below 1",
            kappa * gamma
        )));
    }
    Ok(a)
}

/// `∫_0^∞ e^{-a x}(1 - e^{-x})^{κ-1} f[nodes](x/|γ|) dx` where `f[..]` is the divided
/// difference of `r ↦ e^{r x/|γ|}`: the matching divided difference of `r ↦ ξ_{κ,r}`.
fn xi_divided_difference(kappa: f64, gamma: f64, nodes: &[f64]) -> Result<f64> {
    let a0 = xi_shape(kappa, gamma, 0.0)?;
    let g = gamma.abs();
    let f = |x: f64| {
        let w = libm::exp(-a0 * x + (kappa - 1.0) * libm::log(-libm::expm1(-x)));
        if w == 0.0 {
            return 0.0;
        }
        w * exp_divided_difference(x / g, nodes)
    };
    let spec = QuadratureSpec::default().with_tol(1e-12, 1e-300);
    let head = integrate(f, 0.0, 1.0, &spec.with_transform(Transform::ExpSub))?;
    let tail = integrate(f, 1.0, f64::INFINITY, &spec.with_transform(Transform::SemiInfinite { scale: 1.0 / a0 }))?;
    Ok(head.value + tail.value)
}

/// Coefficients of `E[(X - U(t))_+^κ] ≈ t^{-1} a(t)^κ (L + M1 A + M2 A² + Q A B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaBetaCoeffs {
    pub kappa: f64,
    pub gamma: f64,
    pub rho: f64,
    pub eta: f64,
    /// `ξ_{κ,0}`
    pub xi0: f64,
    /// `ξ_{κ,ρ}`
    pub xi_rho: f64,
    /// `ξ_{κ,2ρ}`
    pub xi_2rho: f64,
    /// `ξ_{κ,ρ+η}`
    pub xi_rho_eta: f64,
    /// `L_κ`
    pub l: f64,
    /// `M_{κ,1}`
    pub m1: f64,
    /// `M_{κ,2}`
    pub m2: f64,
    /// `Q_κ`
    pub q: f64,
}

/// Coefficients for a profile with `γ ≠ 0`.
///
/// When `ρ` or `ρ + η` is close to zero the differences of `ξ` are evaluated as
/// integrals of exponential divided differences, which at zero reduce to the
/// `∫ x^l (1 - e^{-x})^{κ-1} e^{-a x} dx` limits and are continuous in `ρ`.
pub fn kappa_beta_coeffs(profile: &RvProfile, kappa: f64) -> Result<KappaBetaCoeffs> {
    let p = profile.params;
    let (g, rho, eta) = (p.gamma, p.rho, p.eta);
    if g == 0.0 {
        return Err(unsupported("partial-moment coefficients need γ ≠ 0"));
    }
    let x = |r: f64| xi(kappa, g, r);
    let (xi0, xi_rho, xi_2rho, xi_rho_eta) = (x(0.0)?, x(rho)?, x(2.0 * rho)?, x(rho + eta)?);
    let ag = g.abs();
    let sg = g.signum();
    let l = kappa * xi0 / libm::pow(ag, kappa);
    let (dq1, dq2) = if rho.abs() >= DIFF_CUTOFF {
        let d1 = (xi_rho - xi0) / rho;
        // (1-γ)·2ξ[0,ρ,2ρ] - 2ξ[ρ,2ρ]
        let d2 = ((1.0 - 2.0 * rho - g) * xi_2rho - 2.0 * (1.0 - rho - g) * xi_rho + (1.0 - g) * xi0) / (rho * rho);
        (d1, d2)
    } else {
        let d1 = xi_divided_difference(kappa, g, &[0.0, rho])?;
        let second = xi_divided_difference(kappa, g, &[0.0, rho, 2.0 * rho])?;
        let slope = xi_divided_difference(kappa, g, &[rho, 2.0 * rho])?;
        (d1, 2.0 * (1.0 - g) * second - 2.0 * slope)
    };
    let re = rho + eta;
    let dq3 = if re.abs() >= DIFF_CUTOFF {
        (xi_rho_eta - xi0) / re
    } else {
        xi_divided_difference(kappa, g, &[0.0, re])?
    };
    let m1 = kappa * sg * dq1 / libm::pow(ag, kappa + 1.0);
    let m2 = kappa * dq2 / (2.0 * libm::pow(ag, kappa + 2.0));
    let q = kappa * sg * dq3 / libm::pow(ag, kappa + 1.0);
    Ok(KappaBetaCoeffs { kappa, gamma: g, rho, eta, xi0, xi_rho, xi_2rho, xi_rho_eta, l, m1, m2, q })
}

/// Expansion of `E[(X - U(t))_+^κ]` in `t`.
pub fn partial_moment_expand(model: &dyn TailModel, kappa: f64, t: f64, order: u8) -> Result<Expansion> {
    check_order(order)?;
    let prof = model.profile();
    if prof.branch == Branch::Gumbel {
        return Err(unsupported("partial-moment expansion needs γ ≠ 0"));
    }
    let c = kappa_beta_coeffs(&prof, kappa)?;
    if !(t > 1.0) {
        return Err(domain(alloc::format!("t must exceed 1, got {t}")));
    }
    let at = model.first_aux(t)?;
    let a = prof.second(t);
    let b = prof.third(t).unwrap_or(0.0);
    let mut e = Expansion::new(libm::pow(at, kappa) / t * c.l, c.l, order);
    e.push("M_{κ,1}·A(t)", 2, c.m1, a);
    e.push("M_{κ,2}·A²(t)", 3, c.m2, a * a);
    e.push("Q_κ·A(t)B(t)", 3, c.q, a * b);
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rv_kernel::{LimitForm, RvParams};
    use crate::tail_models::Auxiliary;

    fn prof(g: f64, r: f64, e: f64) -> RvProfile {
        RvProfile {
            branch: if g > 0.0 { Branch::Frechet } else { Branch::Weibull },
            params: RvParams::new(g, r, e).unwrap(),
            form: LimitForm::PowerRatio,
            aux: Auxiliary::Exact,
        }
    }

    #[test]
    fn xi_examples() {
        assert!((xi(1.5, 0.5, 0.0).unwrap() - core::f64::consts::FRAC_PI_2).abs() < 1e-14);
        assert!((xi(2.0, -1.0 / 6.0, 0.0).unwrap() - 1.0 / 56.0).abs() < 1e-16);
        assert!(matches!(xi(2.5, 0.5, 0.0), Err(Error::Divergent(_))));
    }

    #[test]
    fn l1_is_mean_excess_constant() {
        for g in [0.3, -0.5, -2.0] {
            let c = kappa_beta_coeffs(&prof(g, -0.5, -0.5), 1.0).unwrap();
            assert!((c.l - 1.0 / (1.0 - g)).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_forms_reference() {
        // Independent high-precision evaluation of the defining integrals.
        let cases = [
            ((-1.0 / 6.0, -1.0 / 6.0, -1.0 / 6.0, 2.0), [1.2857142857142858, -10.285714285714286, 21.6, -8.742857142857142]),
            ((0.5, -0.25, -0.25, 1.5), [6.664324407237549, 30.687178259930874, 24.17928378588406, 19.99297322171265]),
        ];
        for ((g, r, e, k), want) in cases {
            let c = kappa_beta_coeffs(&prof(g, r, e), k).unwrap();
            for (got, w) in [c.l, c.m1, c.m2, c.q].into_iter().zip(want) {
                assert!((got - w).abs() < 1e-10 * w.abs(), "{got} vs {w}");
            }
        }
    }

    #[test]
    fn degenerate_rho_branch_is_continuous() {
        for (g, k) in [(0.5, 1.5), (-1.0 / 3.0, 2.5)] {
            let near = kappa_beta_coeffs(&prof(g, -1e-6, -0.5), k).unwrap();
            let zero = kappa_beta_coeffs(&prof(g, 0.0, -0.5), k).unwrap();
            let wide = kappa_beta_coeffs(&prof(g, -1.001e-3, -0.5), k).unwrap();
            for (a, b) in [(near.m1, zero.m1), (near.m2, zero.m2)] {
                assert!((a - b).abs() < 1e-4 * b.abs(), "{a} {b}");
            }
            // both sides of the cutoff
            let mid = kappa_beta_coeffs(&prof(g, -0.999e-3, -0.5), k).unwrap();
            assert!((mid.m2 - wide.m2).abs() < 1e-4 * wide.m2.abs(), "{} {} {}", mid.m2, wide.m2, zero.m2);
        }
    }
}
