use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tailex::report::{build_table, coefficients, write_coefficients, write_table, Format, RunConfig};
use tailex::spec::{parse_measure, parse_model, parse_orders, parse_q_grid, parse_scaler};
use tailex::verify::{verify_convergence, verify_degenerate, verify_drees, verify_kernels, Check};

/// Higher-order tail approximations checked against exact oracles.
#[derive(Parser)]
#[command(name = "tailex", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact values, approximations and ratios on a grid of levels q.
    Table(TableArgs),
    /// Coefficient ledger behind a measure.
    Coeffs(CommonArgs),
    /// Run a verification suite; exits 1 if any property fails.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// burr:a=,b= | student:v= | beta:a=,b= | hall:b=,alpha=,c=,d=,varrho= | exponential:rate=
    #[arg(long)]
    model: String,
    /// beta:a=,b= | uniform | unit
    #[arg(long, default_value = "unit")]
    scaler: String,
    /// expectile | hg:kappa=K | deflated-tail[:x=X] | deflated-var
    #[arg(long)]
    measure: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated subset of 1,2,3.
    #[arg(long, default_value = "1,2,3")]
    orders: String,
    /// q1,q2,... or a:b:geom[:n].
    #[arg(long, default_value = "0.99:0.999999:geom")]
    q: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Kernels,
    Drees,
    Convergence,
    Degenerate,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long)]
    model: Option<String>,
    #[arg(long, default_value = "unit")]
    scaler: String,
    #[arg(long)]
    measure: Option<String>,
    /// Tolerance of the Drees envelope.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
}

type AnyError = Box<dyn std::error::Error>;

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn table(a: TableArgs) -> Result<(), AnyError> {
    let c = &a.common;
    let cfg = RunConfig {
        model: parse_model(&c.model)?,
        scaler: parse_scaler(&c.scaler)?,
        measure: parse_measure(&c.measure)?,
        q_grid: parse_q_grid(&a.q)?,
        orders: parse_orders(&a.orders)?,
        format: c.format,
    };
    let t = build_table(&cfg)?;
    write_table(&cfg, &t, output(&c.out)?)?;
    Ok(())
}

fn coeffs(c: CommonArgs) -> Result<(), AnyError> {
    let model = parse_model(&c.model)?;
    let scaler = parse_scaler(&c.scaler)?;
    let measure = parse_measure(&c.measure)?;
    let rows = coefficients(model.as_ref(), &scaler, &measure)?;
    write_coefficients(model.as_ref(), &scaler, &measure, &rows, c.format, output(&c.out)?)?;
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<Vec<Check>, AnyError> {
    let need = |v: &Option<String>, flag: &str| v.clone().ok_or_else(|| format!("this suite needs --{flag}"));
    Ok(match a.suite {
        Suite::Kernels => verify_kernels(100, 1e-7),
        Suite::Drees => {
            let m = parse_model(&need(&a.model, "model")?)?;
            vec![verify_drees(m.as_ref(), a.eps)?.0]
        }
        Suite::Convergence => {
            let m = parse_model(&need(&a.model, "model")?)?;
            let measure = parse_measure(&need(&a.measure, "measure")?)?;
            verify_convergence(m.as_ref(), &parse_scaler(&a.scaler)?, measure)?
        }
        Suite::Degenerate => verify_degenerate()?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Table(a) => table(a).map(|_| true),
        Cmd::Coeffs(a) => coeffs(a).map(|_| true),
        Cmd::Verify(a) => verify(a).map(|checks| {
            for c in &checks {
                println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if let Some(first) = checks.iter().find(|c| !c.pass) {
                eprintln!("first failing property: {}", first.name);
            }
            checks.iter().all(|c| c.pass)
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("tailex: {e}");
            ExitCode::from(2)
        }
    }
}
