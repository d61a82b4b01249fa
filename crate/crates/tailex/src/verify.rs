//! Self-checks run by `tailex verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tailex_core::numerics::{integrate, QuadratureSpec};
use tailex_core::risk_measures::{hg_coeffs, Measure, Order, RiskQuery};
use tailex_core::rv_kernel::{drees_check, h_kernel, r_kernel, DreesGrid, DreesReport, RvParams};
use tailex_core::scalers::Scaler;
use tailex_core::tail_models::{Auxiliary, Branch, QuantileTriple, RvProfile, TailModel};
use tailex_core::weyl_engine::{frechet_weyl_coeffs, kappa_beta_coeffs};
use tailex_core::Error;

/// Outcome of one named property.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into() }
    }
}

fn unit_integral<F: FnMut(f64) -> f64>(f: F) -> f64 {
    let spec = QuadratureSpec::default().with_tol(1e-13, 1e-15);
    integrate(f, 0.0, 1.0, &spec).map(|q| q.value).unwrap_or(f64::NAN)
}

/// `∫_0^l f(a) da` written over `[0, 1]`, so negative `l` needs no special casing.
fn along<F: FnMut(f64) -> f64>(l: f64, mut f: F) -> f64 {
    l * unit_integral(|v| f(l * v))
}

/// `H_{γ,ρ}(x) = ∫_1^x s^{γ-1} ∫_1^s u^{ρ-1} du ds` by nested quadrature in log scale.
pub fn h_by_quadrature(x: f64, gamma: f64, rho: f64) -> f64 {
    along(x.ln(), |a| (gamma * a).exp() * along(a, |b| (rho * b).exp()))
}

/// `R_{γ,ρ,η}(x)`, the triple iterated integral.
pub fn r_by_quadrature(x: f64, p: RvParams) -> f64 {
    along(x.ln(), |a| (p.gamma * a).exp() * along(a, |b| (p.rho * b).exp() * along(b, |c| (p.eta * c).exp())))
}

/// `n` parameter/argument tuples, a third of them on degenerate slices.
pub fn kernel_tuples(n: usize, seed: u64) -> Vec<(RvParams, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let mut g = rng.gen_range(-2.0..2.0);
            let mut r = -rng.gen_range(0.0..2.0);
            let mut e = -rng.gen_range(0.0..2.0);
            match i % 6 {
                0 => g = 0.0,
                1 => r = 0.0,
                2 => e = 0.0,
                3 => {
                    g = 0.0;
                    r = 0.0;
                    e = 0.0;
                }
                4 => g = -r,
                _ => {}
            }
            let x = (rng.gen_range(0.05f64.ln()..20f64.ln())).exp();
            (RvParams::new(g, r, e).expect("non-positive indices"), x)
        })
        .collect()
}

pub fn verify_kernels(n: usize, tol: f64) -> Vec<Check> {
    let mut worst = (0.0f64, None);
    for (p, x) in kernel_tuples(n, 0x5eed) {
        let h = h_kernel(x, p.gamma, p.rho).unwrap_or(f64::NAN);
        let r = r_kernel(x, p).unwrap_or(f64::NAN);
        let dh = (h - h_by_quadrature(x, p.gamma, p.rho)).abs() / (1.0 + h.abs());
        let dr = (r - r_by_quadrature(x, p)).abs() / (1.0 + r.abs());
        let d = dh.max(dr);
        if !(d <= worst.0) {
            worst = (d, Some((p, x)));
        }
    }
    let detail = match worst.1 {
        Some((p, x)) => format!(
            "{n} tuples, worst scaled error {:.2e} at γ={} ρ={} η={} x={x}",
            worst.0, p.gamma, p.rho, p.eta
        ),
        None => format!("{n} tuples, exact agreement"),
    };
    vec![Check::new("kernels: H and R match iterated integrals", worst.0 <= tol, detail)]
}

pub fn verify_drees(model: &dyn TailModel, eps: f64) -> Result<(Check, DreesReport), Error> {
    let prof = model.profile();
    let grid = DreesGrid::default();
    let rep = drees_check(&QuantileTriple(model), prof.params, prof.form, eps, &grid)?;
    let pass = rep.is_clean() && rep.t0 <= 1e8;
    let detail = format!(
        "t0 = {:e}, {} grid points, {} violations, {} skipped, max slack {:.3e}",
        rep.t0,
        rep.grid.len(),
        rep.violations.len(),
        rep.skipped,
        rep.max_slack
    );
    Ok((Check::new(format!("drees: {} with ε = {eps}", model.name()), pass, detail), rep))
}

/// Errors `|approx/exact - 1|` per order on `1 - q = 10^{-k}` for `k` in `decades`.
pub fn convergence_errors(
    model: &dyn TailModel,
    s: &Scaler,
    measure: Measure,
    decades: &[f64],
) -> Result<Vec<(f64, [Option<f64>; 3])>, Error> {
    let mut out = Vec::new();
    for &k in decades {
        let q = 1.0 - 10f64.powf(-k);
        let exact = RiskQuery::new(measure, q, Order::Exact)?.eval(model, s)?;
        let mut errs = [None; 3];
        for order in 1..=3u8 {
            match RiskQuery::new(measure, q, Order::Approx(order))?.eval(model, s) {
                Ok(v) => errs[order as usize - 1] = Some((v / exact - 1.0).abs()),
                Err(Error::Unsupported(_)) if order > 1 => {}
                Err(e) => return Err(e),
            }
        }
        out.push((q, errs));
    }
    Ok(out)
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx) * (p.0 - mx)));
    sxy / sxx
}

pub fn verify_convergence(model: &dyn TailModel, s: &Scaler, measure: Measure) -> Result<Vec<Check>, Error> {
    let decades = [2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0];
    let errs = convergence_errors(model, s, measure, &decades)?;
    let mut checks = Vec::new();
    for order in 1..=3usize {
        let pts: Vec<(f64, f64)> = errs
            .iter()
            .filter_map(|(q, e)| e[order - 1].filter(|v| *v > 1e-14).map(|v| ((1.0 - q).log10(), v.log10())))
            .collect();
        if errs.iter().all(|(_, e)| e[order - 1].is_none()) {
            continue;
        }
        let last = errs.last().and_then(|(_, e)| e[order - 1]).unwrap_or(f64::NAN);
        let monotone = errs.iter().filter(|(q, _)| *q >= 1.0 - 1e-4).all(|(_, e)| match (order, e[order - 1]) {
            (1, Some(v)) => v.is_finite(),
            (k, Some(v)) => e[k - 2].is_none_or(|prev| v <= prev),
            (_, None) => true,
        });
        let sl = if pts.len() >= 2 { slope(&pts) } else { f64::INFINITY };
        checks.push(Check::new(
            format!("convergence: order {order}"),
            monotone && (sl > 0.0 || last < 1e-13),
            format!("slope of log10|err| vs log10(1-q): {sl:.3}; error at q = 1-1e-6: {last:.3e}"),
        ));
    }
    Ok(checks)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn profile(g: f64, r: f64, e: f64) -> RvProfile {
    RvProfile {
        branch: if g > 0.0 { Branch::Frechet } else { Branch::Weibull },
        params: RvParams { gamma: g, rho: r, eta: e },
        form: tailex_core::rv_kernel::LimitForm::PowerRatio,
        aux: Auxiliary::Exact,
    }
}

/// Values on both sides of every switch-over to a limit formula agree.
pub fn verify_degenerate() -> Result<Vec<Check>, Error> {
    let tol = 1e-4;
    let mut out = Vec::new();
    let (lo, hi) = (-1.001e-3, -0.999e-3);
    for g in [0.4, -0.3] {
        let a = kappa_beta_coeffs(&profile(g, lo, -0.5), 1.5)?;
        let b = kappa_beta_coeffs(&profile(g, hi, -0.5), 1.5)?;
        let ok = rel_close(a.m1, b.m1, tol) && rel_close(a.m2, b.m2, tol) && rel_close(a.q, b.q, tol);
        out.push(Check::new(
            format!("degenerate: M and Q across ρ cutoff (γ = {g})"),
            ok,
            format!("M2 {} vs {}", a.m2, b.m2),
        ));
    }
    let a = hg_coeffs(&profile(0.4, lo, -0.5), 1.5)?;
    let b = hg_coeffs(&profile(0.4, hi, -0.5), 1.5)?;
    out.push(Check::new(
        "degenerate: H-G coefficients across ρ cutoff",
        rel_close(a.c1, b.c1, tol) && rel_close(a.c2, b.c2, tol) && rel_close(a.c3, b.c3, tol),
        format!("c2 {} vs {}", a.c2, b.c2),
    ));
    let s = Scaler::beta(2.0, 3.0)?;
    let a = frechet_weyl_coeffs(1.0, 3.0, -1.0000002e-7, -1.0, &s)?;
    let b = frechet_weyl_coeffs(1.0, 3.0, -0.9999998e-7, -1.0, &s)?;
    out.push(Check::new(
        "degenerate: Fréchet coefficients across ϱ cutoff",
        rel_close(a.d1, b.d1, tol) && rel_close(a.d2, b.d2, tol) && rel_close(a.d3, b.d3, tol),
        format!("d1 {} vs {}", a.d1, b.d1),
    ));
    let x = 3.7;
    let h0 = h_kernel(x, 0.0, -0.5)?;
    let h1 = h_kernel(x, 1e-9, -0.5)?;
    let r0 = r_kernel(x, RvParams { gamma: 0.3, rho: 0.0, eta: 0.0 })?;
    let r1 = r_kernel(x, RvParams { gamma: 0.3, rho: -1e-9, eta: -1e-9 })?;
    out.push(Check::new(
        "degenerate: kernels continuous at zero indices",
        rel_close(h0, h1, 1e-7) && rel_close(r0, r1, 1e-7),
        format!("H {h0} vs {h1}; R {r0} vs {r1}"),
    ));
    Ok(out)
}
