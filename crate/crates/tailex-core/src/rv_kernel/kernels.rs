//! The limit kernels `D`, `H` and `R` of first-, second- and third-order regular variation.
//!
//! With `L = ln x` and `f(z) = e^{Lz}` the three kernels are divided differences of `f`:
//! `D_γ = f[0, γ]`, `H_{γ,ρ} = f[0, γ, γ+ρ]` and `R_{γ,ρ,η} = f[0, γ, γ+ρ, γ+ρ+η]`.
//! Coincident nodes give confluent divided differences, which are exactly the
//! limit branches at `ρ = 0`, `γ + ρ = 0` and so on, so no special cases are needed.

use crate::error::{domain, Result};

use super::RvParams;

// Nodes closer than this (in units of 1/|L|) are handled by the Taylor expansion
// about their centre instead of the difference quotient.
const TAYLOR_SPREAD: f64 = 1.0;
const MAX_TERMS: usize = 80;

/// Divided difference `f[z_0, ..., z_n]` of `f(z) = e^{lz}` (at most 8 nodes).
pub fn exp_divided_difference(l: f64, nodes: &[f64]) -> f64 {
    let mut z = [0.0f64; 8];
    let n = nodes.len();
    assert!((1..=8).contains(&n), "between 1 and 8 nodes supported");
    z[..n].copy_from_slice(nodes);
    z[..n].sort_by(f64::total_cmp);
    dd_sorted(l, &z[..n])
}

fn dd_sorted(l: f64, z: &[f64]) -> f64 {
    let n = z.len();
    if n == 1 {
        return libm::exp(l * z[0]);
    }
    let spread = z[n - 1] - z[0];
    if l.abs() * spread <= TAYLOR_SPREAD {
        return dd_taylor(l, z);
    }
    (dd_sorted(l, &z[1..]) - dd_sorted(l, &z[..n - 1])) / spread
}

// f[z_0..z_n] = e^{lc} Σ_k l^{n+k} h_k(δ) / (n+k)!, δ_i = z_i - c, with h_k the
// complete homogeneous symmetric polynomials of degree k.
fn dd_taylor(l: f64, z: &[f64]) -> f64 {
    let n = z.len() - 1;
    let c = 0.5 * (z[0] + z[n]);
    let mut h = [0.0f64; MAX_TERMS];
    h[0] = 1.0;
    for &zi in z {
        let d = zi - c;
        for k in 1..MAX_TERMS {
            h[k] += d * h[k - 1];
        }
    }
    // l^n / n!
    let mut coef = 1.0;
    for j in 1..=n {
        coef *= l / j as f64;
    }
    let mut sum = 0.0;
    let mut prev_small = false;
    for (k, hk) in h.iter().enumerate() {
        let term = coef * hk;
        sum += term;
        // Odd-degree h_k vanish for symmetric nodes, so wait for two small terms in a row.
        let small = term.abs() <= 1e-18 * sum.abs();
        if k > 2 && small && prev_small {
            break;
        }
        prev_small = small;
        coef *= l / (n + k + 1) as f64;
        if coef == 0.0 {
            break;
        }
    }
    libm::exp(l * c) * sum
}

fn log_arg(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(alloc::format!("kernel argument must be positive, got {x}")));
    }
    Ok(libm::log(x))
}

/// `D_γ(x) = (x^γ - 1)/γ`, `ln x` at `γ = 0`.
pub fn d_kernel(x: f64, gamma: f64) -> Result<f64> {
    Ok(d_kernel_log(log_arg(x)?, gamma))
}

/// [`d_kernel`] taking `ln x`.
pub fn d_kernel_log(l: f64, gamma: f64) -> f64 {
    if gamma.abs() < 1e-12 {
        return l;
    }
    let gl = gamma * l;
    if gl.abs() < 1e-4 {
        return l * (1.0 + gl / 2.0 + gl * gl / 6.0);
    }
    libm::expm1(gl) / gamma
}

/// `H_{γ,ρ}(x) = ∫_1^x y^{γ-1} ∫_1^y u^{ρ-1} du dy`.
pub fn h_kernel(x: f64, gamma: f64, rho: f64) -> Result<f64> {
    Ok(h_kernel_log(log_arg(x)?, gamma, rho))
}

/// [`h_kernel`] taking `ln x`.
pub fn h_kernel_log(l: f64, gamma: f64, rho: f64) -> f64 {
    exp_divided_difference(l, &[0.0, gamma, gamma + rho])
}

/// `R_{γ,ρ,η}(x) = ∫_1^x y^{γ-1} ∫_1^y u^{ρ-1} ∫_1^u v^{η-1} dv du dy`.
pub fn r_kernel(x: f64, p: RvParams) -> Result<f64> {
    Ok(r_kernel_log(log_arg(x)?, p))
}

/// [`r_kernel`] taking `ln x`.
pub fn r_kernel_log(l: f64, p: RvParams) -> f64 {
    let g = p.gamma;
    let gr = g + p.rho;
    exp_divided_difference(l, &[0.0, g, gr, gr + p.eta])
}

/// Second-order kernel of the power form `f(tx)/f(t) → x^γ`: `x^γ D_ρ(x)/γ`.
///
/// This is the second-order limit of `(U(tx) - U(t))/(γ U(t))` when `U ∈ 2RV_{γ,ρ}`
/// and `γ ≠ 0`; it differs from `H_{γ,ρ}` by a multiple of `D_γ`.
pub fn h_rv_log(l: f64, gamma: f64, rho: f64) -> f64 {
    libm::exp(gamma * l) * d_kernel_log(l, rho) / gamma
}

/// Third-order companion of [`h_rv_log`]: `x^γ D_{ρ+η}(x)/γ`.
pub fn r_rv_log(l: f64, p: RvParams) -> f64 {
    libm::exp(p.gamma * l) * d_kernel_log(l, p.rho + p.eta) / p.gamma
}

/// Which pair of limit kernels a profile's second/third-order expansion uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitForm {
    /// `(H_{γ,ρ}, R_{γ,ρ,η})`, the extended form of an ERV function.
    Extended,
    /// `(x^γ D_ρ/γ, x^γ D_{ρ+η}/γ)`, the form induced by `f ∈ 3RV_{γ,ρ,η}` with `a = γ f`.
    PowerRatio,
}

impl LimitForm {
    pub fn h_log(self, l: f64, p: RvParams) -> f64 {
        match self {
            LimitForm::Extended => h_kernel_log(l, p.gamma, p.rho),
            LimitForm::PowerRatio => h_rv_log(l, p.gamma, p.rho),
        }
    }

    pub fn r_log(self, l: f64, p: RvParams) -> f64 {
        match self {
            LimitForm::Extended => r_kernel_log(l, p),
            LimitForm::PowerRatio => r_rv_log(l, p),
        }
    }
}
