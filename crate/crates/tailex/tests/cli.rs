//! Option-string parsing, table output and the `tailex` binary's exit codes.

use std::process::Command;

use proptest::prelude::*;
use tailex::report::{build_table, coefficients, write_table, Format, RunConfig};
use tailex::spec::{parse_measure, parse_model, parse_orders, parse_q_grid, parse_scaler};
use tailex_core::risk_measures::Measure;
use tailex_core::scalers::Scaler;

fn tailex(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_tailex")).args(args).output().expect("binary runs")
}

fn config(model: &str, scaler: &str, measure: &str, q: &str, orders: &str) -> RunConfig {
    RunConfig {
        model: parse_model(model).unwrap(),
        scaler: parse_scaler(scaler).unwrap(),
        measure: parse_measure(measure).unwrap(),
        q_grid: parse_q_grid(q).unwrap(),
        orders: parse_orders(orders).unwrap(),
        format: Format::Csv,
    }
}

fn render(cfg: &RunConfig) -> String {
    let mut buf = Vec::new();
    write_table(cfg, &build_table(cfg).unwrap(), &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

proptest! {
    #[test]
    fn model_names_round_trip(a in 0.1f64..10.0, b in 0.1f64..10.0, v in 1.01f64..30.0) {
        for spec in [format!("burr:a={a},b={b}"), format!("beta:a={a},b={b}"), format!("student:v={v}")] {
            let m = parse_model(&spec).unwrap();
            prop_assert_eq!(m.name(), spec.clone());
            prop_assert_eq!(parse_model(&m.name()).unwrap().name(), spec);
        }
    }

    #[test]
    fn geometric_grids(a in 0.01f64..0.9, gap in 1e-8f64..0.09, n in 2usize..60) {
        let b = 1.0 - gap;
        prop_assume!(a < b);
        let g = parse_q_grid(&format!("{a}:{b}:geom:{n}")).unwrap();
        prop_assert_eq!(g.len(), n);
        prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(g.iter().all(|q| *q > 0.0 && *q < 1.0));
        prop_assert!((g[0] - a).abs() < 1e-12 && ((1.0 - g[n - 1]) / gap - 1.0).abs() < 1e-9);
        // 1 - q is geometric.
        let r0 = (1.0 - g[1]) / (1.0 - g[0]);
        for w in g.windows(2) {
            prop_assert!(((1.0 - w[1]) / (1.0 - w[0]) / r0 - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn listed_grids_must_increase(qs in proptest::collection::vec(0.001f64..0.999, 2..8)) {
        let s = qs.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let increasing = qs.windows(2).all(|w| w[0] < w[1]);
        prop_assert_eq!(parse_q_grid(&s).is_ok(), increasing);
    }
}

#[test]
fn spec_errors_name_the_problem() {
    let e = parse_model("burr:a=2").err().unwrap().to_string();
    assert!(e.contains("'b'"), "{e}");
    let e = parse_model("burr:a=2,b=1,z=3").err().unwrap().to_string();
    assert!(e.contains("'z'"), "{e}");
    assert!(parse_model("pareto:a=1").is_err());
    assert!(parse_model("student:v=0.5").is_err());
    assert!(parse_measure("hg:kappa=0.5").is_err());
    assert!(parse_measure("hg").is_err());
    assert_eq!(parse_measure("hg:kappa=1.5").unwrap(), Measure::Hg { kappa: 1.5 });
    assert_eq!(parse_measure("deflated-tail").unwrap(), Measure::DeflatedTail { x: None });
    assert_eq!(parse_scaler("uniform").unwrap(), Scaler::uniform());
    assert!(parse_orders("0,1").is_err());
    assert_eq!(parse_orders("3,1,3").unwrap(), vec![1, 3]);
    assert!(parse_q_grid("0.9,1.0").is_err());
}

#[test]
fn table_layout_and_byte_stability() {
    let cfg = config("burr:a=2,b=1.5", "unit", "expectile", "0.99:0.999999:geom:7", "1,3");
    let first = render(&cfg);
    assert_eq!(first, render(&cfg));
    let lines: Vec<&str> = first.lines().collect();
    assert!(lines[0].starts_with("# tailex table model=burr:a=2,b=1.5"));
    assert_eq!(lines[1], "q,exact,order1,order2,order3,ratio1,ratio2,ratio3");
    assert_eq!(lines.len(), 2 + 7);
    for row in &lines[2..] {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 8);
        // Order 2 was not requested.
        assert!(cells[3].is_empty() && cells[6].is_empty());
        let r3: f64 = cells[7].parse().unwrap();
        assert!((r3 - 1.0).abs() < 1e-3);
    }
}

#[test]
fn short_tail_order_three_is_reported_unavailable() {
    let out = render(&config("beta:a=2,b=3", "unit", "expectile", "0.999,0.9999", "1,2,3"));
    assert!(out.lines().next().unwrap().ends_with("unavailable=3"));
    assert!(out.lines().skip(2).all(|l| l.ends_with(',')));
}

#[test]
fn pre_asymptotic_cells_are_flagged() {
    let out = render(&config("exponential:rate=1", "beta:a=2,b=3", "deflated-tail:x=5", "0.5", "1"));
    let row = out.lines().nth(2).unwrap();
    assert!(row.split(',').nth(5).unwrap().ends_with('!'), "{row}");
}

#[test]
fn coefficient_ledger_contents() {
    let m = parse_model("student:v=3").unwrap();
    let rows = coefficients(m.as_ref(), &Scaler::Unit, &Measure::Expectile).unwrap();
    let d1 = rows.iter().find(|(k, _)| k == "d1").unwrap().1;
    assert_eq!(d1, -2.0 / 3.0);
    let m = parse_model("burr:a=0.5,b=4").unwrap();
    let rows = coefficients(m.as_ref(), &Scaler::Unit, &Measure::Hg { kappa: 1.5 }).unwrap();
    let c0 = rows.iter().find(|(k, _)| k == "c0").unwrap().1;
    assert!((c0 - 2.69355).abs() < 1e-5);
}

#[test]
fn binary_exit_codes() {
    let ok = tailex(&["table", "--model", "student:v=1.2", "--measure", "expectile", "--q", "0.9979"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    let exact: f64 = text.lines().nth(2).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((exact - 261.0483).abs() < 0.01);

    let again = tailex(&["table", "--model", "student:v=1.2", "--measure", "expectile", "--q", "0.9979"]);
    assert_eq!(text.as_bytes(), &again.stdout[..]);

    // Expectile expansions need γ ≠ 0.
    let bad = tailex(&["table", "--model", "exponential", "--measure", "expectile", "--q", "0.99"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8(bad.stderr).unwrap().contains("γ ≠ 0"));

    assert_eq!(tailex(&["table", "--model", "burr:a=2", "--measure", "expectile"]).status.code(), Some(2));
    assert_eq!(tailex(&["bogus"]).status.code(), Some(2));

    let v = tailex(&["verify", "kernels"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(String::from_utf8(v.stdout).unwrap().starts_with("PASS"));

    let coeffs = tailex(&["coeffs", "--model", "burr:a=0.5,b=4", "--measure", "hg:kappa=1.5", "--format", "tsv"]);
    assert_eq!(coeffs.status.code(), Some(0));
    assert!(String::from_utf8(coeffs.stdout).unwrap().lines().any(|l| l.starts_with("c0\t2.693")));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("tailex-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.tsv");
    let st = tailex(&[
        "table", "--model", "burr:a=2,b=1.5", "--measure", "hg:kappa=1.5", "--q", "0.999", "--format", "tsv", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(st.status.code(), Some(0));
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.lines().nth(1).unwrap().starts_with("q\texact\t"));
    std::fs::remove_dir_all(&dir).unwrap();
}
