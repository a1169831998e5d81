//! `flexsearch`: solve, sweep, verify and compare from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 no trade.

mod verify;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flexsearch::model::{ModelParams, Regime};
use flexsearch::observable::StaticParam;
use flexsearch::sweep::{evaluate, grid, run_sweep, to_csv, Market, Point};
use flexsearch::welfare::{compare_competition, compare_monopoly, RegimeComparison};

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_NO_TRADE: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, message: message.into() }
}

impl From<flexsearch::Error> for Failure {
    fn from(e: flexsearch::Error) -> Self {
        invalid(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "flexsearch", version, about = "Consumer search with flexible learning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one parameter point.
    Solve(SolveArgs),
    /// Solve a one-dimensional grid and write CSV.
    Sweep(SweepArgs),
    /// Run the numerical oracles and report deviations as JSON.
    Verify(verify::VerifyArgs),
    /// Compare observable and hidden prices.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Vary {
    Mu,
    C,
    Kappa,
}

impl From<Vary> for StaticParam {
    fn from(v: Vary) -> Self {
        match v {
            Vary::Mu => StaticParam::Mu,
            Vary::C => StaticParam::C,
            Vary::Kappa => StaticParam::Kappa,
        }
    }
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SolveArgs {
    #[arg(long)]
    mu: f64,
    /// Search cost; ignored with --monopoly.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    kappa: f64,
    /// Outside option (monopoly only).
    #[arg(long)]
    outside: Option<f64>,
    /// Prices are seen only after learning.
    #[arg(long)]
    hidden: bool,
    /// A single firm instead of a search market.
    #[arg(long)]
    monopoly: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SweepArgs {
    #[arg(long, value_enum)]
    vary: Vary,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long)]
    steps: usize,
    /// Log-spaced grid.
    #[arg(long)]
    log: bool,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    outside: Option<f64>,
    #[arg(long)]
    hidden: bool,
    #[arg(long)]
    monopoly: bool,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct CompareArgs {
    #[arg(long)]
    mu: f64,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    kappa: f64,
    #[arg(long)]
    monopoly: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn market(monopoly: bool) -> Market {
    if monopoly {
        Market::Monopoly
    } else {
        Market::Competition
    }
}

fn outside_for(monopoly: bool, outside: Option<f64>) -> Result<f64, Failure> {
    match (monopoly, outside) {
        (false, Some(_)) => Err(invalid("--outside applies only with --monopoly")),
        (_, o) => Ok(o.unwrap_or(0.0)),
    }
}

fn search_cost(monopoly: bool, c: Option<f64>) -> Result<f64, Failure> {
    match (monopoly, c) {
        (true, _) => Ok(f64::NAN),
        (false, Some(c)) => Ok(c),
        (false, None) => Err(invalid("--c is required unless --monopoly is set")),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn solve(args: SolveArgs) -> Result<(String, u8), Failure> {
    let point = Point {
        mu: args.mu,
        c: search_cost(args.monopoly, args.c)?,
        kappa: args.kappa,
        outside: outside_for(args.monopoly, args.outside)?,
    };
    let row = evaluate(market(args.monopoly), args.hidden, point, None)?;
    let regime = if args.hidden { row.hidden_regime.unwrap_or(Regime::NoTrade) } else { row.regime };
    let text = match args.format {
        Format::Csv => to_csv(std::slice::from_ref(&row)),
        Format::Json => to_json(&row) + "\n",
    };
    Ok((text, if regime.has_trade() { 0 } else { EXIT_NO_TRADE }))
}

fn sweep(args: SweepArgs) -> Result<(String, u8), Failure> {
    let vary = StaticParam::from(args.vary);
    let need = |v: Option<f64>, name: &str, varied: bool| -> Result<f64, Failure> {
        match (v, varied) {
            (_, true) => Ok(f64::NAN),
            (Some(x), false) => Ok(x),
            (None, false) => Err(invalid(format!("--{name} is required when it is not the swept parameter"))),
        }
    };
    let base = Point {
        mu: need(args.mu, "mu", vary == StaticParam::Mu)?,
        c: if args.monopoly { f64::NAN } else { need(args.c, "c", vary == StaticParam::C)? },
        kappa: need(args.kappa, "kappa", vary == StaticParam::Kappa)?,
        outside: outside_for(args.monopoly, args.outside)?,
    };
    let values = grid(args.from, args.to, args.steps, args.log)?;
    let rows = run_sweep(market(args.monopoly), args.hidden, base, vary, &values)?;
    let text = to_csv(&rows);
    match args.out {
        Some(path) => {
            fs::write(&path, text).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?;
            Ok((String::new(), 0))
        }
        None => Ok((text, 0)),
    }
}

const COMPARE_COLUMNS: &str = "observable_regime,observable_price,observable_profit,observable_welfare,\
hidden_regime,hidden_p_lower,hidden_profit,hidden_welfare,firm_prefers_observable,consumer_prefers_observable";

fn compare_csv(cmp: &RegimeComparison) -> String {
    let n = |x: f64| format!("{x:.16e}");
    let (o, h) = (&cmp.observable, &cmp.hidden);
    format!(
        "{COMPARE_COLUMNS}\n{},{},{},{},{},{},{},{},{},{}\n",
        o.regime.label(),
        n(o.price),
        n(o.profit),
        n(o.consumer_welfare),
        h.regime.label(),
        h.p_lower.map(n).unwrap_or_default(),
        n(h.profit),
        n(h.consumer_welfare),
        cmp.firm_prefers_observable,
        cmp.consumer_prefers_observable
    )
}

fn compare(args: CompareArgs) -> Result<(String, u8), Failure> {
    let cmp = if args.monopoly {
        compare_monopoly(args.mu, args.kappa)?
    } else {
        let c = search_cost(false, args.c)?;
        compare_competition(&ModelParams::new(args.mu, c, args.kappa)?)?
    };
    let text = match args.format {
        Format::Csv => compare_csv(&cmp),
        Format::Json => to_json(&cmp) + "\n",
    };
    Ok((text, if cmp.any_trade() { 0 } else { EXIT_NO_TRADE }))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("FLEXSEARCH_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| invalid(format!("FLEXSEARCH_THREADS must be a non-negative integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| invalid(format!("cannot start thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(String, u8), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Solve(a) => solve(a),
        Command::Sweep(a) => sweep(a),
        Command::Verify(a) => verify::run(a),
        Command::Compare(a) => compare(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, code)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(EXIT_INVALID);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
