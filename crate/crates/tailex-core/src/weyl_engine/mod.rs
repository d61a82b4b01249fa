//! Higher-order expansions of `E[X^κ 1{SX > x}]` and of the partial moments
//! `E[(X - U(t))_+^κ]`.

mod frechet;
mod gw;
mod kappa;

use alloc::string::String;
use alloc::vec::Vec;

pub use frechet::{frechet_weyl_coeffs, frechet_weyl_expand, FrechetWeylCoeffs};
pub use gw::{gw_constants, gw_expand, GwConstants, GwPlan, PRE_ASYMPTOTIC_PHI};
pub use kappa::{kappa_beta_coeffs, partial_moment_expand, xi, KappaBetaCoeffs};

use crate::error::{domain, Result};

/// One correction term of an [`Expansion`].
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub label: String,
    /// Order at which the term enters (2 or 3).
    pub order: u8,
    pub coefficient: f64,
    /// Product of auxiliary functions multiplying the coefficient.
    pub auxiliary: f64,
    /// `coefficient · auxiliary / base`.
    pub contribution: f64,
}

/// `leading · (1 + Σ contributions)`, truncated at `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub leading: f64,
    /// Order-one coefficient the corrections are normalised by.
    pub base: f64,
    pub terms: Vec<Term>,
    pub order: u8,
    pub value: f64,
    /// Set when the expansion variable has not reached the asymptotic range.
    pub pre_asymptotic: bool,
}

impl Expansion {
    pub(crate) fn new(leading: f64, base: f64, order: u8) -> Self {
        Self { leading, base, terms: Vec::new(), order, value: leading, pre_asymptotic: false }
    }

    pub(crate) fn push(&mut self, label: &str, order: u8, coefficient: f64, auxiliary: f64) {
        if order > self.order {
            return;
        }
        // 0 · ∞ never happens for finite auxiliaries; an exact profile gives 0.
        let contribution = if auxiliary == 0.0 { 0.0 } else { coefficient * auxiliary / self.base };
        self.terms.push(Term { label: String::from(label), order, coefficient, auxiliary, contribution });
        self.value = self.value_at(self.order);
    }

    /// Value truncated at `order ≤ self.order`.
    pub fn value_at(&self, order: u8) -> f64 {
        let s: f64 = self.terms.iter().filter(|t| t.order <= order).map(|t| t.contribution).sum();
        self.leading * (1.0 + s)
    }
}

/// Rejects expansion orders outside 1..=3.
pub fn check_order(order: u8) -> Result<()> {
    if !(1..=3).contains(&order) {
        return Err(domain(alloc::format!("expansion order must be 1, 2 or 3, got {order}")));
    }
    Ok(())
}
