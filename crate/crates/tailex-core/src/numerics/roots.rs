//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Bracket and stopping rule for [`find_root`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSpec {
    pub lo: f64,
    pub hi: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_iter: usize,
}

impl RootSpec {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi, rel_tol: 1e-12, abs_tol: 0.0, max_iter: 200 }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

/// Brent's method. Every evaluation point lies inside the current bracket.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, spec: &RootSpec) -> Result<f64> {
    let (mut xpre, mut xcur) = (spec.lo, spec.hi);
    let mut fpre = f(xpre);
    let mut fcur = f(xcur);
    if fpre == 0.0 {
        return Ok(xpre);
    }
    if fcur == 0.0 {
        return Ok(xcur);
    }
    if fpre.is_nan() || fcur.is_nan() || fpre.signum() == fcur.signum() {
        return Err(Error::NotBracketed { lo: spec.lo, hi: spec.hi, f_lo: fpre, f_hi: fcur });
    }
    let (mut xblk, mut fblk) = (0.0, 0.0);
    let (mut spre, mut scur) = (0.0, 0.0);
    for _ in 0..spec.max_iter {
        if fpre != 0.0 && fcur != 0.0 && fpre.signum() != fcur.signum() {
            xblk = xpre;
            fblk = fpre;
            spre = xcur - xpre;
            scur = spre;
        }
        if fblk.abs() < fcur.abs() {
            xpre = xcur;
            xcur = xblk;
            xblk = xpre;
            fpre = fcur;
            fcur = fblk;
            fblk = fpre;
        }
        let delta = 0.5 * (spec.abs_tol.max(f64::MIN_POSITIVE) + spec.rel_tol * xcur.abs());
        let sbis = 0.5 * (xblk - xcur);
        if fcur == 0.0 || sbis.abs() < delta {
            return Ok(xcur);
        }
        if spre.abs() > delta && fcur.abs() < fpre.abs() {
            let stry = if xpre == xblk {
                -fcur * (xcur - xpre) / (fcur - fpre)
            } else {
                let dpre = (fpre - fcur) / (xpre - xcur);
                let dblk = (fblk - fcur) / (xblk - xcur);
                -fcur * (fblk * dblk - fpre * dpre) / (dblk * dpre * (fblk - fpre))
            };
            if 2.0 * stry.abs() < spre.abs().min(3.0 * sbis.abs() - delta) {
                spre = scur;
                scur = stry;
            } else {
                spre = sbis;
                scur = sbis;
            }
        } else {
            spre = sbis;
            scur = sbis;
        }
        xpre = xcur;
        fpre = fcur;
        if scur.abs() > delta {
            xcur += scur;
        } else {
            xcur += if sbis > 0.0 { delta } else { -delta };
        }
        fcur = f(xcur);
        if fcur.is_nan() {
            return Err(crate::error::domain("residual evaluated to NaN inside bracket"));
        }
    }
    let (lo, hi) = if xcur < xblk { (xcur, xblk) } else { (xblk, xcur) };
    Err(Error::RootIterations { iterations: spec.max_iter, lo, hi })
}

/// Widens `[lo, hi]` geometrically until `f` changes sign.
///
/// `lo` moves towards `floor` and `hi` towards `cap`; each step halves the remaining
/// distance when the limit is finite and doubles the width otherwise.
pub fn expand_bracket<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    floor: f64,
    cap: f64,
    max_steps: usize,
) -> Result<(f64, f64)> {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    for _ in 0..max_steps {
        if flo.signum() != fhi.signum() || flo == 0.0 || fhi == 0.0 {
            return Ok((lo, hi));
        }
        let width = (hi - lo).max(f64::MIN_POSITIVE);
        if flo.abs() < fhi.abs() {
            lo = if floor.is_finite() { 0.5 * (lo + floor) } else { lo - 2.0 * width };
            flo = f(lo);
        } else {
            hi = if cap.is_finite() { 0.5 * (hi + cap) } else { hi + 2.0 * width };
            fhi = f(hi);
        }
    }
    if flo.signum() != fhi.signum() {
        return Ok((lo, hi));
    }
    Err(Error::NotBracketed { lo, hi, f_lo: flo, f_hi: fhi })
}

/// Bracket for a decreasing `f`, marching from `x0` in the direction of the sign.
///
/// Steps double from `step`; a finite `floor` or `cap` is approached by halving the
/// remaining distance instead.
pub fn bracket_decreasing<F: FnMut(f64) -> f64>(
    mut f: F,
    x0: f64,
    step: f64,
    floor: f64,
    cap: f64,
    max_steps: usize,
) -> Result<(f64, f64)> {
    let f0 = f(x0);
    if f0 == 0.0 {
        return Ok((x0, x0));
    }
    let up = f0 > 0.0;
    let (mut prev, mut x, mut h) = (x0, x0, step);
    let mut fx = f0;
    for _ in 0..max_steps {
        let next = if up {
            if (x + h) < cap { x + h } else { 0.5 * (x + cap) }
        } else if (x - h) > floor {
            x - h
        } else {
            0.5 * (x + floor)
        };
        prev = x;
        x = next;
        fx = f(x);
        if fx.is_nan() {
            return Err(crate::error::domain("residual evaluated to NaN while bracketing"));
        }
        if (fx <= 0.0) == up {
            return Ok(if up { (prev, x) } else { (x, prev) });
        }
        h *= 2.0;
    }
    let (lo, hi) = if up { (prev, x) } else { (x, prev) };
    Err(Error::NotBracketed { lo, hi, f_lo: f0, f_hi: fx })
}
