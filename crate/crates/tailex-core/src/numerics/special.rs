//! Gamma-family special functions and the regularized incomplete beta function.

use crate::error::{domain, Result};

/// `ln |Γ(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `Γ(x)`.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `ln B(a, b)` for `a, b > 0`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(domain(alloc::format!("beta function needs positive arguments, got ({a}, {b})")));
    }
    if a + b < 150.0 {
        Ok(libm::log(gamma(a) * gamma(b) / gamma(a + b)))
    } else {
        Ok(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))
    }
}

/// `B(a, b) = Γ(a)Γ(b)/Γ(a+b)` for `a, b > 0`.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(domain(alloc::format!("beta function needs positive arguments, got ({a}, {b})")));
    }
    if a + b < 150.0 {
        Ok(gamma(a) * gamma(b) / gamma(a + b))
    } else {
        Ok(libm::exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)))
    }
}

/// Digamma `ψ(x)`; poles at non-positive integers return a domain error.
pub fn digamma(x: f64) -> Result<f64> {
    if x <= 0.0 && x == libm::floor(x) {
        return Err(domain(alloc::format!("digamma pole at {x}")));
    }
    if x < 0.0 {
        // Reflection: ψ(1-x) - ψ(x) = π cot(πx).
        let pi = core::f64::consts::PI;
        return Ok(digamma(1.0 - x)? - pi / libm::tan(pi * x));
    }
    let mut acc = 0.0;
    let mut z = x;
    while z < 10.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let r = 1.0 / (z * z);
    let series = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0 - r * (1.0 / 252.0 - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * 691.0 / 32760.0)))));
    Ok(acc + libm::log(z) - 0.5 / z - series)
}

/// Trigamma `ψ'(x)` for `x > 0`.
pub fn trigamma(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(domain(alloc::format!("trigamma implemented for x > 0 only, got {x}")));
    }
    let mut acc = 0.0;
    let mut z = x;
    while z < 20.0 {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    let r = 1.0 / (z * z);
    let series = 1.0 / z
        + 0.5 * r
        + (r / z) * (1.0 / 6.0 - r * (1.0 / 30.0 - r * (1.0 / 42.0 - r * (1.0 / 30.0 - r * 5.0 / 66.0))));
    Ok(acc + series)
}

// Modified Lentz evaluation of the incomplete-beta continued fraction.
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// `I_x(a, b)` with the complement `y = 1 - x` supplied separately, so callers
/// holding an exact `1 - x` keep its precision. Returns `(I_x(a,b), I_y(b,a))`.
pub fn inc_beta_pair(a: f64, b: f64, x: f64, y: f64) -> Result<(f64, f64)> {
    if !(a > 0.0 && b > 0.0) {
        return Err(domain("incomplete beta needs positive shape parameters"));
    }
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
        return Err(domain(alloc::format!("incomplete beta argument {x} outside [0, 1]")));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if y == 0.0 {
        return Ok((1.0, 0.0));
    }
    let lnb = ln_beta(a, b)?;
    let front = libm::exp(a * libm::log(x) + b * libm::log(y) - lnb);
    if x < (a + 1.0) / (a + b + 2.0) {
        let v = front * beta_cf(a, b, x) / a;
        Ok((v, 1.0 - v))
    } else {
        let w = front * beta_cf(b, a, y) / b;
        Ok((1.0 - w, w))
    }
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    Ok(inc_beta_pair(a, b, x, 1.0 - x)?.0)
}

/// Inverse of `x ↦ I_x(a, b)`: the `x` in `[0, 1]` with `I_x(a, b) = p`.
///
/// For `p > 1/2` the problem is mirrored to `I_{1-x}(b, a) = 1 - p` so small tail
/// probabilities keep full relative precision.
pub fn inc_beta_inv(p: f64, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(domain("incomplete beta inverse needs positive shape parameters"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(alloc::format!("probability {p} outside [0, 1]")));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    if p > 0.5 {
        return Ok(1.0 - inc_beta_inv_lower(1.0 - p, b, a)?);
    }
    inc_beta_inv_lower(p, a, b)
}

/// Solves `I_x(a, b) = p` for `p ≤ 1/2` by safeguarded Newton iteration.
pub fn inc_beta_inv_lower(p: f64, a: f64, b: f64) -> Result<f64> {
    let lnb = ln_beta(a, b)?;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    // Leading term I_x ≈ x^a / (a B(a,b)) near zero.
    let mut x = libm::exp((libm::log(p) + libm::log(a) + lnb) / a).min(0.5);
    if !(x > 0.0) {
        x = f64::MIN_POSITIVE;
    }
    for _ in 0..300 {
        let (ix, _) = inc_beta_pair(a, b, x, 1.0 - x)?;
        let f = ix - p;
        if f == 0.0 {
            return Ok(x);
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let ln_pdf = (a - 1.0) * libm::log(x) + (b - 1.0) * libm::log1p(-x) - lnb;
        let step = f / libm::exp(ln_pdf);
        let mut next = x - step;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = if lo > 0.0 && hi / lo > 4.0 {
                libm::sqrt(lo * hi)
            } else if lo == 0.0 {
                0.0625 * hi
            } else {
                0.5 * (lo + hi)
            };
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x || (hi - lo) <= 4.0 * f64::EPSILON * hi {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}
