//! Regular-variation calculus: limit kernels, Hall-class functions and their
//! inverses, and an empirical checker for the third-order Drees-type inequality.

mod drees;
mod hall;
mod kernels;

pub use drees::{drees_check, drees_envelope, drees_lhs, DreesGrid, DreesReport, DreesTriple, FnTriple};
pub use hall::{HallAuxiliaries, HallFunction, HallInverseCoeffs};
pub use kernels::{
    d_kernel, d_kernel_log, exp_divided_difference, h_kernel, h_kernel_log, h_rv_log, r_kernel, r_kernel_log,
    r_rv_log, LimitForm,
};

use crate::error::{domain, Result};

/// Indices `(γ, ρ, η)` of third-order regular variation; `ρ, η ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RvParams {
    pub gamma: f64,
    pub rho: f64,
    pub eta: f64,
}

impl RvParams {
    pub fn new(gamma: f64, rho: f64, eta: f64) -> Result<Self> {
        if !(gamma.is_finite() && rho.is_finite() && eta.is_finite()) {
            return Err(domain("regular-variation indices must be finite"));
        }
        if rho > 0.0 || eta > 0.0 {
            return Err(domain(alloc::format!("second/third-order indices must be non-positive, got rho={rho}, eta={eta}")));
        }
        Ok(Self { gamma, rho, eta })
    }
}
