//! Convergence tables and coefficient ledgers.

use std::io::Write;

use tailex_core::risk_measures::{
    deflated_hall, deflated_tail_expansion, expectile_frechet_coeffs, expectile_weibull_coeffs, hg_coeffs, hg_series,
    Measure, Order, RiskQuery,
};
use tailex_core::scalers::Scaler;
use tailex_core::tail_models::{Branch, TailModel};
use tailex_core::weyl_engine::{frechet_weyl_coeffs, kappa_beta_coeffs, GwPlan};
use tailex_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Tsv,
}

impl Format {
    fn delimiter(self) -> u8 {
        match self {
            Format::Csv => b',',
            Format::Tsv => b'\t',
        }
    }
}

pub struct RunConfig {
    pub model: Box<dyn TailModel>,
    pub scaler: Scaler,
    pub measure: Measure,
    pub q_grid: Vec<f64>,
    pub orders: Vec<u8>,
    pub format: Format,
}

pub fn measure_label(m: &Measure) -> String {
    match m {
        Measure::Hg { kappa } => format!("hg:kappa={kappa}"),
        Measure::Expectile => "expectile".into(),
        Measure::DeflatedTail { x: Some(x) } => format!("deflated-tail:x={x}"),
        Measure::DeflatedTail { x: None } => "deflated-tail".into(),
        Measure::DeflatedVar => "deflated-var".into(),
    }
}

/// One evaluated table cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub value: f64,
    pub pre_asymptotic: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub q: f64,
    pub exact: f64,
    /// Indexed by order - 1; `None` for unrequested or unavailable orders.
    pub approx: [Option<Cell>; 3],
}

impl Row {
    pub fn ratio(&self, order: u8) -> Option<f64> {
        self.approx[order as usize - 1].map(|c| c.value / self.exact)
    }
}

pub struct Table {
    pub rows: Vec<Row>,
    /// Requested orders the expansion does not provide for this model.
    pub unavailable: Vec<u8>,
}

fn approx_cell(cfg: &RunConfig, q: f64, k: u8) -> Result<Cell, Error> {
    let model = cfg.model.as_ref();
    if let Measure::DeflatedTail { x } = cfg.measure {
        let x = match x {
            Some(x) => x,
            None => model.quantile(q)?,
        };
        let e = deflated_tail_expansion(model, &cfg.scaler, x, k)?;
        return Ok(Cell { value: e.value, pre_asymptotic: e.pre_asymptotic });
    }
    let value = RiskQuery::new(cfg.measure, q, Order::Approx(k))?.eval(model, &cfg.scaler)?;
    Ok(Cell { value, pre_asymptotic: false })
}

/// Evaluates the oracle and every requested order on the grid.
///
/// Rows are computed on scoped worker threads and merged in grid order. An unsupported
/// lowest order is an error; an unsupported higher order leaves its column empty and is
/// listed in [`Table::unavailable`].
pub fn build_table(cfg: &RunConfig) -> Result<Table, Error> {
    let n = cfg.q_grid.len();
    let workers = std::thread::available_parallelism().map_or(1, |w| w.get()).min(n.max(1));
    let chunk = n.div_ceil(workers.max(1)).max(1);
    let results: Vec<Result<(Row, Vec<u8>), Error>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cfg
            .q_grid
            .chunks(chunk)
            .map(|qs| scope.spawn(move || qs.iter().map(|&q| build_row(cfg, q)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("table worker panicked")).collect()
    });
    let mut unavailable = Vec::new();
    let mut rows = Vec::with_capacity(n);
    for r in results {
        let (row, missing) = r?;
        for k in missing {
            if !unavailable.contains(&k) {
                unavailable.push(k);
            }
        }
        rows.push(row);
    }
    unavailable.sort_unstable();
    Ok(Table { rows, unavailable })
}

fn build_row(cfg: &RunConfig, q: f64) -> Result<(Row, Vec<u8>), Error> {
    let exact = RiskQuery::new(cfg.measure, q, Order::Exact)?.eval(cfg.model.as_ref(), &cfg.scaler)?;
    let mut approx = [None; 3];
    let mut missing = Vec::new();
    for &k in &cfg.orders {
        match approx_cell(cfg, q, k) {
            Ok(c) => approx[k as usize - 1] = Some(c),
            Err(Error::Unsupported(_)) if k > cfg.orders[0] => missing.push(k),
            Err(e) => return Err(e),
        }
    }
    Ok((Row { q, exact, approx }, missing))
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

pub fn write_table<W: Write>(cfg: &RunConfig, table: &Table, mut out: W) -> std::io::Result<()> {
    let orders: Vec<String> = cfg.orders.iter().map(u8::to_string).collect();
    write!(
        out,
        "# tailex table model={} scaler={} measure={} orders={}",
        cfg.model.name(),
        cfg.scaler.name(),
        measure_label(&cfg.measure),
        orders.join(","),
    )?;
    if !table.unavailable.is_empty() {
        let u: Vec<String> = table.unavailable.iter().map(u8::to_string).collect();
        write!(out, " unavailable={}", u.join(","))?;
    }
    writeln!(out)?;
    let mut w = csv::WriterBuilder::new().delimiter(cfg.format.delimiter()).from_writer(out);
    w.write_record(["q", "exact", "order1", "order2", "order3", "ratio1", "ratio2", "ratio3"])?;
    for row in &table.rows {
        let mut rec = vec![num(row.q), num(row.exact)];
        rec.extend(row.approx.iter().map(|c| c.map(|c| num(c.value)).unwrap_or_default()));
        rec.extend((1..=3u8).map(|k| {
            let flag = row.approx[k as usize - 1].is_some_and(|c| c.pre_asymptotic);
            row.ratio(k).map(|r| format!("{}{}", num(r), if flag { "!" } else { "" })).unwrap_or_default()
        }));
        w.write_record(&rec)?;
    }
    w.flush()
}

/// `(symbol, value)` rows of the coefficient ledger behind `measure`.
pub fn coefficients(model: &dyn TailModel, s: &Scaler, measure: &Measure) -> Result<Vec<(String, f64)>, Error> {
    let prof = model.profile();
    let p = prof.params;
    let mut out: Vec<(String, f64)> = vec![("γ".into(), p.gamma), ("ρ".into(), p.rho), ("η".into(), p.eta)];
    let mut add = |k: &str, v: f64| out.push((k.to_string(), v));
    match *measure {
        Measure::Expectile => match prof.branch {
            Branch::Frechet => {
                let mean = model.mean().ok_or_else(|| Error::Divergent("expectile needs a finite mean".into()))?;
                for (k, v) in expectile_frechet_coeffs(&prof, mean)?.labeled() {
                    add(k, v);
                }
            }
            Branch::Weibull => {
                let w = expectile_weibull_coeffs(model)?;
                for (k, v) in [("C", w.c), ("α", w.alpha), ("x0", w.x0), ("x_F", w.endpoint), ("mean", w.mean), ("A-coefficient", w.a_coeff)] {
                    add(k, v);
                }
            }
            Branch::Gumbel => return Err(Error::Unsupported("expectile expansions need γ ≠ 0".into())),
        },
        Measure::Hg { kappa } => {
            let c = hg_coeffs(&prof, kappa)?;
            for (k, v) in [
                ("κ", kappa),
                ("c̄", c.c_bar),
                ("c0", c.c0),
                ("c1", c.c1),
                ("c2", c.c2),
                ("c3 (εψ)", c.c3),
                ("c4 (εβ)", c.c4),
                ("Δ_κ", c.delta),
                ("M̃_{κ,1}", c.m_tilde),
                ("Λ_κ", c.lambda),
            ] {
                add(k, v);
            }
            let b = kappa_beta_coeffs(&prof, kappa)?;
            for (k, v) in [
                ("ξ_{κ,0}", b.xi0),
                ("ξ_{κ,ρ}", b.xi_rho),
                ("ξ_{κ,2ρ}", b.xi_2rho),
                ("ξ_{κ,ρ+η}", b.xi_rho_eta),
                ("L_κ", b.l),
                ("M_{κ,1}", b.m1),
                ("M_{κ,2}", b.m2),
                ("Q_κ", b.q),
            ] {
                add(k, v);
            }
            let sr = hg_series(&prof, kappa)?;
            add("series power of (1-q)", sr.exponent);
            add("series first", sr.first);
            add("series second", sr.second);
        }
        Measure::DeflatedTail { .. } => match prof.branch {
            Branch::Frechet => {
                let sp = model
                    .sf_profile()
                    .ok_or_else(|| Error::Unsupported("model has no survival-scale profile".into()))?;
                let c = frechet_weyl_coeffs(0.0, -sp.params.gamma, sp.params.rho, sp.params.eta, s)?;
                for (k, v) in [("α", c.alpha), ("d0", c.d0), ("d1", c.d1), ("d2", c.d2), ("d3", c.d3), ("d3β", c.d3_drift)] {
                    add(k, v);
                }
            }
            _ => {
                let plan = GwPlan::new(model, s, 0.0)?;
                add("α", plan.tail.alpha);
                add("ϱ", plan.tail.varrho);
                add("ς", plan.tail.varsigma);
                for (k, v) in plan.constants.labeled() {
                    add(k, v);
                }
            }
        },
        Measure::DeflatedVar => {
            let h = model
                .survival_hall()
                .ok_or_else(|| Error::Unsupported("deflated VaR expansion needs a Hall-form survival function".into()))?;
            let d = deflated_hall(&h, s)?;
            let k = d.inverse_coeffs()?;
            for (key, v) in [
                ("b E S^α", d.scale),
                ("α", -d.alpha),
                ("c E S^{α-ϱ}/E S^α", d.c),
                ("d E S^{α-2ϱ}/E S^α", d.d),
                ("ϱ", d.rho),
                ("k1", k.c1),
                ("k2", k.c2),
            ] {
                add(key, v);
            }
        }
    }
    Ok(out)
}

pub fn write_coefficients<W: Write>(
    model: &dyn TailModel,
    s: &Scaler,
    measure: &Measure,
    rows: &[(String, f64)],
    format: Format,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "# tailex coeffs model={} scaler={} measure={}", model.name(), s.name(), measure_label(measure))?;
    let mut w = csv::WriterBuilder::new().delimiter(format.delimiter()).from_writer(out);
    w.write_record(["symbol", "value"])?;
    for (k, v) in rows {
        w.write_record([k.as_str(), &format!("{v:e}")])?;
    }
    w.flush()
}
