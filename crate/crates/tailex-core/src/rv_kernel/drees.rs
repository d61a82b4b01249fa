//! Empirical check of the third-order Drees-type inequality.

use alloc::vec::Vec;

use crate::error::{domain, Result};

use super::kernels::{d_kernel_log, LimitForm};
use super::RvParams;

/// A function together with its first-, second- and third-order auxiliaries.
pub trait DreesTriple {
    /// `(f(tx) - f(t))/a(t) - D_γ(x)`. Implementations should avoid the cancellation of
    /// the naive formula, since the checker divides this by `A(t) B(t)`.
    fn first_excess(&self, t: f64, x: f64) -> f64;
    /// Second-order auxiliary `A(t)`.
    fn second(&self, t: f64) -> f64;
    /// Third-order auxiliary `B(t)`.
    fn third(&self, t: f64) -> f64;
}

/// A [`DreesTriple`] from plain closures, using the naive excess formula.
pub struct FnTriple<F, Fa, FA, FB> {
    pub f: F,
    pub a: Fa,
    pub big_a: FA,
    pub big_b: FB,
    pub gamma: f64,
}

impl<F, Fa, FA, FB> DreesTriple for FnTriple<F, Fa, FA, FB>
where
    F: Fn(f64) -> f64,
    Fa: Fn(f64) -> f64,
    FA: Fn(f64) -> f64,
    FB: Fn(f64) -> f64,
{
    fn first_excess(&self, t: f64, x: f64) -> f64 {
        ((self.f)(t * x) - (self.f)(t)) / (self.a)(t) - d_kernel_log(libm::log(x), self.gamma)
    }
    fn second(&self, t: f64) -> f64 {
        (self.big_a)(t)
    }
    fn third(&self, t: f64) -> f64 {
        (self.big_b)(t)
    }
}

/// Sampling plan for [`drees_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct DreesGrid {
    /// Thresholds tried in increasing order until the grid is clean.
    pub t0_candidates: Vec<f64>,
    pub t_max: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub n_t: usize,
    pub n_x: usize,
    /// Constant `C` of the `γ = ρ = 0` envelope term.
    pub c_const: f64,
}

impl Default for DreesGrid {
    fn default() -> Self {
        Self {
            t0_candidates: (2..=10).map(|k| libm::pow(10.0, k as f64)).collect(),
            t_max: 1e10,
            x_min: 0.05,
            x_max: 20.0,
            n_t: 20,
            n_x: 20,
            c_const: 1.0,
        }
    }
}

/// Outcome of [`drees_check`] at the calibrated threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct DreesReport {
    pub epsilon: f64,
    pub t0: f64,
    pub grid: Vec<(f64, f64)>,
    pub violations: Vec<(f64, f64)>,
    /// Largest `lhs - envelope` over the grid; negative when every point is clean.
    pub max_slack: f64,
    /// Grid points dropped because `A(t) B(t) = 0`.
    pub skipped: usize,
}

impl DreesReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 || lo == hi {
        return alloc::vec![lo];
    }
    let (l0, l1) = (libm::log(lo), libm::log(hi));
    (0..n)
        .map(|i| libm::exp(l0 + (l1 - l0) * i as f64 / (n - 1) as f64))
        .collect()
}

/// Right-hand side of the inequality at `x`.
pub fn drees_envelope(p: RvParams, epsilon: f64, c_const: f64, x: f64) -> f64 {
    let l = libm::log(x);
    let pw = |e: f64| libm::exp(e * l);
    let mut env = 1.0
        + pw(p.gamma)
        + 2.0 * pw(p.gamma + p.rho)
        + 4.0 * pw(p.gamma + p.rho + p.eta) * libm::exp(epsilon * l.abs());
    if p.gamma == 0.0 && p.rho == 0.0 {
        env += libm::exp(c_const * l.abs());
    }
    epsilon * env
}

/// Left-hand side of the inequality at `(t, x)`; `None` when `A(t) B(t) = 0`.
pub fn drees_lhs<T: DreesTriple + ?Sized>(triple: &T, p: RvParams, form: LimitForm, t: f64, x: f64) -> Option<f64> {
    let a2 = triple.second(t);
    let b3 = triple.third(t);
    if a2 * b3 == 0.0 || !(a2 * b3).is_finite() {
        return None;
    }
    let l = libm::log(x);
    let second = triple.first_excess(t, x) / a2 - form.h_log(l, p);
    Some((second / b3 - form.r_log(l, p)).abs())
}

/// Evaluates the third-order Drees envelope on a `(t, x)` grid.
///
/// Thresholds from `grid.t0_candidates` are tried in order; the report for the first
/// clean grid is returned, or the report at the last candidate if none is clean.
pub fn drees_check<T: DreesTriple + ?Sized>(
    triple: &T,
    params: RvParams,
    form: LimitForm,
    epsilon: f64,
    grid: &DreesGrid,
) -> Result<DreesReport> {
    if !(epsilon > 0.0) {
        return Err(domain("epsilon must be positive"));
    }
    if grid.t0_candidates.is_empty() || !(grid.x_min > 0.0 && grid.x_max >= grid.x_min) {
        return Err(domain("Drees grid needs thresholds and a positive x range"));
    }
    let probe = geometric(grid.t0_candidates[0], grid.t_max, grid.n_t.max(2));
    if probe.iter().all(|&t| triple.second(t) * triple.third(t) == 0.0) {
        return Err(domain("degenerate auxiliary: A(t) B(t) vanishes, nothing to check at third order"));
    }
    let xs = geometric(grid.x_min, grid.x_max, grid.n_x);
    let mut last = None;
    for &t0 in &grid.t0_candidates {
        let ts = geometric(t0, grid.t_max.max(t0), grid.n_t);
        let mut report = DreesReport {
            epsilon,
            t0,
            grid: Vec::new(),
            violations: Vec::new(),
            max_slack: f64::NEG_INFINITY,
            skipped: 0,
        };
        for &t in &ts {
            for &x in &xs {
                if t.min(t * x) < t0 {
                    continue;
                }
                report.grid.push((t, x));
                let Some(lhs) = drees_lhs(triple, params, form, t, x) else {
                    report.skipped += 1;
                    continue;
                };
                let slack = lhs - drees_envelope(params, epsilon, grid.c_const, x);
                if slack > report.max_slack || slack.is_nan() {
                    report.max_slack = slack;
                }
                if !(slack <= 0.0) {
                    report.violations.push((t, x));
                }
            }
        }
        let clean = report.is_clean();
        last = Some(report);
        if clean {
            break;
        }
    }
    Ok(last.expect("at least one threshold candidate"))
}
