//! Reference values by quadrature and bracketed root finding.

use crate::error::{domain, unsupported, Error, Result};
use crate::numerics::{bracket_decreasing, find_root, integrate, QuadratureSpec, RootSpec, Transform};
use crate::scalers::Scaler;
use crate::tail_models::{Branch, TailModel};

fn spec() -> QuadratureSpec {
    QuadratureSpec::default().with_tol(1e-12, 1e-300)
}

// Inner integrals only need to be accurate relative to the outer result.
const INNER_REL: f64 = 1e-15;

/// `∫_0^{len} f(w) dw` (`len` may be infinite) for `f` with an integrable singularity
/// at zero; `scale` sets where the semi-infinite piece starts.
fn integrate_from_zero<F: Fn(f64) -> f64>(f: F, len: f64, scale: f64) -> Result<f64> {
    integrate_from_zero_abs(f, len, scale, 1e-300)
}

fn integrate_from_zero_abs<F: Fn(f64) -> f64>(f: F, len: f64, scale: f64, abs: f64) -> Result<f64> {
    let sp = spec().with_tol(1e-12, abs);
    if len.is_finite() {
        return Ok(integrate(&f, 0.0, len, &sp.with_transform(Transform::ExpSub))?.value);
    }
    let head = integrate(&f, 0.0, scale, &sp.with_transform(Transform::ExpSub))?;
    let tail = integrate(&f, scale, f64::INFINITY, &sp.with_transform(Transform::HeavyTail { scale }))?;
    Ok(head.value + tail.value)
}

fn check_moment(model: &dyn TailModel, kappa: f64) -> Result<()> {
    let p = model.profile();
    if p.branch == Branch::Frechet && kappa * p.params.gamma >= 1.0 {
        return Err(Error::Divergent(alloc::format!(
            "moment of order {kappa} diverges for tail index γ = {}",
            p.params.gamma
        )));
    }
    Ok(())
}

/// `E[(X - x)_+^κ]`.
pub fn exact_partial_moment(model: &dyn TailModel, x: f64, kappa: f64) -> Result<f64> {
    if !(kappa >= 0.0) {
        return Err(domain(alloc::format!("κ must be non-negative, got {kappa}")));
    }
    check_moment(model, kappa)?;
    if kappa == 0.0 {
        return Ok(model.sf(x));
    }
    let xf = model.endpoint();
    if x >= xf {
        return Ok(0.0);
    }
    let len = xf - x;
    let scale = x.abs().max(1.0);
    if kappa >= 1.0 {
        integrate_from_zero(|w| if w <= 0.0 { 0.0 } else { kappa * libm::pow(w, kappa - 1.0) * model.sf(x + w) }, len, scale)
    } else {
        let inv = 1.0 / kappa;
        integrate_from_zero(|w| model.sf(x + libm::pow(w, inv)), libm::pow(len, kappa), libm::pow(scale, kappa))
    }
}

/// `E[X^κ 1{X > z}]` for `z > 0` (any `z` when `κ = 0`); `abs` is the absolute tolerance.
fn upper_moment(model: &dyn TailModel, z: f64, kappa: f64, abs: f64) -> Result<f64> {
    if kappa == 0.0 {
        return Ok(model.sf(z));
    }
    let xf = model.endpoint();
    if z >= xf {
        return Ok(0.0);
    }
    let z = z.max(model.lower_endpoint());
    let rest = integrate_from_zero_abs(
        |w| kappa * libm::pow(z + w, kappa - 1.0) * model.sf(z + w),
        xf - z,
        z.abs().max(1.0),
        abs,
    )?;
    let head = model.sf(z);
    Ok(if head == 0.0 { rest } else { libm::pow(z, kappa) * head + rest })
}

/// `E[X^κ 1{X > x_F - g}]` for a finite positive endpoint, in gap coordinates.
fn upper_moment_gap(model: &dyn TailModel, g: f64, kappa: f64, abs: f64) -> Result<f64> {
    if !(g > 0.0) {
        return Ok(0.0);
    }
    if kappa == 0.0 {
        return Ok(model.sf_gap(g));
    }
    let xf = model.endpoint();
    let z = xf - g;
    if !(z > 0.0) {
        return upper_moment(model, z, kappa, abs);
    }
    // ∫_z^{x_F} κ y^{κ-1} F̄(y) dy with y = x_F - w.
    let rest = integrate(
        |w: f64| kappa * libm::pow(xf - w, kappa - 1.0) * model.sf_gap(w),
        0.0,
        g,
        &spec().with_tol(1e-12, abs).with_transform(Transform::ExpSub),
    )?;
    Ok(libm::pow(z, kappa) * model.sf_gap(g) + rest.value)
}

/// `E[X^κ 1{SX > x}]` by nested quadrature.
pub fn exact_weyl_integral(model: &dyn TailModel, s: &Scaler, x: f64, kappa: f64) -> Result<f64> {
    if !(kappa >= 0.0) {
        return Err(domain(alloc::format!("κ must be non-negative, got {kappa}")));
    }
    check_moment(model, kappa)?;
    if kappa > 0.0 && !(x > 0.0) {
        return Err(domain(alloc::format!("x must be positive when κ > 0, got {x}")));
    }
    let xf = model.endpoint();
    let bounded = xf.is_finite() && xf > 0.0;
    match *s {
        Scaler::Unit if bounded && x > 0.0 => upper_moment_gap(model, xf - x, kappa, 1e-300),
        Scaler::Unit => upper_moment(model, x, kappa, 1e-300),
        Scaler::Beta { .. } => {
            if !(x > 0.0) {
                return Err(unsupported("deflated tails are computed for x > 0"));
            }
            if bounded {
                return bounded_weyl(model, s, x, kappa);
            }
            // S ≤ 1, so E[X^κ 1{X > x}] bounds the result.
            let abs = INNER_REL * upper_moment(model, x, kappa, 1e-300)?;
            let outer = QuadratureSpec::default().with_tol(1e-11, 1e-300).with_transform(Transform::ExpSub);
            let mut err = None;
            let mut f = |sv: f64, h: f64| {
                if !(sv > 0.0 && h > 0.0) {
                    return 0.0;
                }
                match upper_moment(model, x / sv, kappa, abs) {
                    Ok(v) => v * s.density_split(sv, h),
                    Err(e) => {
                        err.get_or_insert(e);
                        0.0
                    }
                }
            };
            let lower = integrate(|sv: f64| f(sv, 1.0 - sv), 0.0, 0.5, &outer)?;
            let upper = integrate(|h: f64| f(1.0 - h, h), 0.0, 0.5, &outer)?;
            if let Some(e) = err {
                return Err(e);
            }
            Ok(lower.value + upper.value)
        }
    }
}

// Finite endpoint: only `S > x/x_F` contributes. With `u = 1 - S` on `[0, L]`,
// `L = (x_F - x)/x_F`, the gap `x_F - x/S` is formed without cancellation from
// either end of the range.
fn bounded_weyl(model: &dyn TailModel, s: &Scaler, x: f64, kappa: f64) -> Result<f64> {
    let xf = model.endpoint();
    let g0 = xf - x;
    if !(g0 > 0.0) {
        return Ok(0.0);
    }
    let len = g0 / xf;
    let abs = INNER_REL * upper_moment_gap(model, g0, kappa, 1e-300)?;
    let outer = QuadratureSpec::default().with_tol(1e-11, 1e-300).with_transform(Transform::ExpSub);
    let mut err = None;
    let mut f = |u: f64, gap: f64| {
        if !(u > 0.0 && u < 1.0 && gap > 0.0) {
            return 0.0;
        }
        match upper_moment_gap(model, gap, kappa, abs) {
            Ok(v) => v * s.density_split(1.0 - u, u),
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        }
    };
    let half = 0.5 * len;
    let near_one = integrate(|u: f64| f(u, (g0 - xf * u) / (1.0 - u)), 0.0, half, &outer)?;
    let near_edge = integrate(|w: f64| f(len - w, xf * w / (1.0 - len + w)), 0.0, len - half, &outer)?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(near_one.value + near_edge.value)
}

/// `VaR_q(SX)` as the root of `P(SX > x) = 1 - q`.
pub fn exact_deflated_var(model: &dyn TailModel, s: &Scaler, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(domain(alloc::format!("q must lie in (0, 1), got {q}")));
    }
    let hi = model.quantile(q)?;
    if !(hi > 0.0) {
        return Err(unsupported("deflated VaR is computed for positive quantiles"));
    }
    let target = libm::log1p(-q);
    let g = |y: f64| match exact_weyl_integral(model, s, libm::exp(y), 0.0) {
        Ok(p) if p > 0.0 => libm::log(p) - target,
        Ok(_) => f64::NEG_INFINITY,
        Err(_) => f64::NAN,
    };
    let top = libm::log(hi);
    let (lo, hi) = bracket_decreasing(g, top, 1.0, f64::NEG_INFINITY, f64::INFINITY, 200)?;
    Ok(libm::exp(find_root(g, &RootSpec::new(lo, hi).with_rel_tol(1e-13))?))
}

/// Expectile: the root of `(2q - 1) E(X - e)_+ = (1 - q)(e - E X)`.
pub fn exact_expectile(model: &dyn TailModel, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(domain(alloc::format!("q must lie in (0, 1), got {q}")));
    }
    let mean = model.mean().ok_or_else(|| Error::Divergent(alloc::string::String::from("expectile needs a finite mean")))?;
    if q == 0.5 {
        return Ok(mean);
    }
    let mut failure = None;
    let mut r = |e: f64| match exact_partial_moment(model, e, 1.0) {
        Ok(pm) => (2.0 * q - 1.0) * pm - (1.0 - q) * (e - mean),
        Err(err) => {
            failure.get_or_insert(err);
            f64::NAN
        }
    };
    let (xf, x0) = (model.endpoint(), model.lower_endpoint());
    let step = if q > 0.5 && xf.is_finite() {
        0.5 * (xf - mean)
    } else if q < 0.5 && x0.is_finite() {
        0.5 * (mean - x0)
    } else {
        (model.quantile(q)? - mean).abs().max(1.0)
    };
    let (lo, hi) = bracket_decreasing(&mut r, mean, step, x0, xf, 400)?;
    let root = find_root(&mut r, &RootSpec::new(lo, hi).with_rel_tol(1e-14).with_abs_tol(1e-300));
    if let Some(e) = failure {
        return Err(e);
    }
    root
}

/// Haezendonck–Goovaerts measure with power Young function: returns `(H_q, x*)`.
pub fn exact_hg(model: &dyn TailModel, q: f64, kappa: f64) -> Result<(f64, f64)> {
    if !(q > 0.0 && q < 1.0) {
        return Err(domain(alloc::format!("q must lie in (0, 1), got {q}")));
    }
    if !(kappa >= 1.0) {
        return Err(domain(alloc::format!("H-G measure needs κ ≥ 1, got {kappa}")));
    }
    check_moment(model, kappa)?;
    let h = 1.0 - q;
    if kappa == 1.0 {
        let x = model.quantile(q)?;
        let pm = exact_partial_moment(model, x, 1.0)?;
        return Ok((x + pm / h, x));
    }
    let ln_h = libm::log(h);
    let x_of = |lt: f64| model.tail_quantile(libm::exp(lt));
    let mut failure = None;
    let mut g = |lt: f64| {
        let r = x_of(lt).and_then(|x| {
            let a = exact_partial_moment(model, x, kappa - 1.0)?;
            let b = exact_partial_moment(model, x, kappa)?;
            Ok(kappa * libm::log(a) - (kappa - 1.0) * libm::log(b) - ln_h)
        });
        match r {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        }
    };
    let lt0 = -ln_h;
    let found = bracket_decreasing(&mut g, lt0, 1.0, 0.0, f64::INFINITY, 200)
        .and_then(|(lo, hi)| find_root(&mut g, &RootSpec::new(lo, hi).with_rel_tol(1e-14)));
    if let Some(e) = failure {
        return Err(e);
    }
    let x = x_of(found?)?;
    let pm = exact_partial_moment(model, x, kappa)?;
    Ok((x + libm::pow(pm / h, 1.0 / kappa), x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tail_models::{BetaModel, HallModel, Student};

    #[test]
    fn partial_moment_examples() {
        let u = BetaModel::new(1.0, 1.0).unwrap();
        assert!((exact_partial_moment(&u, 0.5, 1.0).unwrap() - 0.125).abs() < 1e-13);
        let p = HallModel::new(1.0, 3.0, 0.0, 0.0, -1.0).unwrap();
        assert!((exact_partial_moment(&p, 2.0, 1.0).unwrap() - 0.125).abs() < 1e-12);
        assert_eq!(exact_partial_moment(&p, 2.0, 0.0).unwrap(), 0.125);
        assert!(matches!(exact_partial_moment(&p, 2.0, 3.0), Err(Error::Divergent(_))));
    }

    #[test]
    fn weyl_integral_pareto_uniform() {
        let p = HallModel::new(1.0, 3.0, 0.0, 0.0, -1.0).unwrap();
        let v = exact_weyl_integral(&p, &Scaler::uniform(), 2.0, 0.0).unwrap();
        assert!((v - 0.03125).abs() < 1e-12);
    }

    #[test]
    fn student_mean_excess_closed_form() {
        let v = 3.0;
        let m = Student::new(v).unwrap();
        for e in [-2.0, 0.3, 5.0, 40.0] {
            let norm = libm::sqrt(v) * crate::numerics::beta(v / 2.0, 0.5).unwrap();
            let dens = libm::pow(1.0 + e * e / v, -(v + 1.0) / 2.0) / norm;
            let want = (v + e * e) * dens / (v - 1.0) - e * m.sf(e);
            let got = exact_partial_moment(&m, e, 1.0).unwrap();
            assert!((got / want - 1.0).abs() < 1e-10, "{e}: {got} {want}");
        }
    }

    #[test]
    fn uniform_expectile() {
        let u = BetaModel::new(1.0, 1.0).unwrap();
        for q in [0.2, 0.75, 0.99] {
            let want = (q - libm::sqrt(q - q * q)) / (2.0 * q - 1.0);
            assert!((exact_expectile(&u, q).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn expected_shortfall() {
        let u = BetaModel::new(1.0, 1.0).unwrap();
        let (h, x) = exact_hg(&u, 0.9, 1.0).unwrap();
        assert!((h - 0.95).abs() < 1e-12 && (x - 0.9).abs() < 1e-12);
    }
}
