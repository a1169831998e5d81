//! The `verify` subcommand: runs oracle suites and reports each check.

use clap::{Args, ValueEnum};
use serde::Serialize;

use flexsearch::hidden::{competition_hidden_solve, monopoly_mixed_solve, MixedEquilibrium};
use flexsearch::learning::{continuation_value, optimal_policy, StoppingPayoff};
use flexsearch::model::{LearningPolicy, ModelParams, Prior};
use flexsearch::verify::{check_mixed_equilibrium, simulate_two_barrier, RandomWalkConfig, UpperHull, WalkReport};

use crate::{invalid, Failure, EXIT_VERIFY};

/// Grid size for the envelope suite.
const ENVELOPE_POINTS: usize = 4001;
const ENVELOPE_TOL: f64 = 1e-5;
const MIXED_TOL: f64 = 1e-8;
const MIXED_GRID: usize = 200;
/// Walk checks pass within this many standard errors.
const WALK_SE: f64 = 4.0;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Walk,
    Envelope,
    Mixed,
    All,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    #[arg(long, default_value_t = 100_000)]
    paths: u64,
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// Search cost; the market checks of the mixed suite are skipped without it.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    #[arg(long, default_value_t = 0.0)]
    outside: f64,
    /// Price used by the walk and envelope suites; defaults to `mu - outside`.
    #[arg(long)]
    price: Option<f64>,
    /// Diffusion scale of the walk; the flow cost is `kappa * sigma^2`.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
}

#[derive(Serialize)]
struct Check {
    name: String,
    value: f64,
    tolerance: f64,
    passed: bool,
}

impl Check {
    fn new(name: &str, value: f64, tolerance: f64) -> Self {
        Check { name: name.to_string(), value, tolerance, passed: value <= tolerance }
    }
}

#[derive(Serialize)]
struct Inputs {
    mu: f64,
    c: Option<f64>,
    kappa: f64,
    outside: f64,
    price: f64,
    sigma: f64,
    dt: f64,
    paths: u64,
    seed: u64,
}

#[derive(Serialize)]
struct Report {
    suite: Suite,
    inputs: Inputs,
    walk: Option<WalkReport>,
    checks: Vec<Check>,
    passed: bool,
}

fn walk(prior: Prior, price: f64, args: &VerifyArgs, report: &mut Report) -> Result<(), Failure> {
    let (u_low, u_high, p_high) = match optimal_policy(prior, price, args.outside) {
        LearningPolicy::Learn { u_low, u_high, p_high } => (u_low, u_high, p_high),
        other => return Err(invalid(format!("the walk suite needs a learning policy, got {other:?}"))),
    };
    let config = RandomWalkConfig {
        sigma: args.sigma,
        gamma: prior.kappa * args.sigma * args.sigma,
        dt: args.dt,
        n_paths: args.paths,
        seed: args.seed,
    };
    let r = simulate_two_barrier(&config, prior.mu, u_low, u_high)?;
    let cost = prior.kappa * (u_high - prior.mu) * (prior.mu - u_low);
    report.checks.push(Check::new("walk_hit_high", (r.hit_high_fraction - p_high).abs(), WALK_SE * r.stderr_hit));
    report.checks.push(Check::new("walk_cost", (r.mean_cost - cost).abs(), WALK_SE * r.stderr_cost));
    report.walk = Some(r);
    Ok(())
}

fn envelope(prior: Prior, price: f64, outside: f64, report: &mut Report) -> Result<(), Failure> {
    let payoff = StoppingPayoff::new(prior, price, outside);
    let half = 2.0 / prior.kappa + (prior.mu - price - outside).abs() + 1.0;
    let (lo, hi) = (prior.mu - half, prior.mu + half);
    let last = (ENVELOPE_POINTS - 1) as f64;
    let points: Vec<(f64, f64)> = (0..ENVELOPE_POINTS)
        .map(|i| {
            let u = lo + (hi - lo) * i as f64 / last;
            (u, payoff.eval(u))
        })
        .collect();
    let env = UpperHull::new(&points)?.eval(prior.mu)?;
    let w = continuation_value(prior, price, outside);
    report.checks.push(Check::new("envelope_value", (env - w).abs(), ENVELOPE_TOL));
    Ok(())
}

fn mixed_checks(label: &str, eq: &MixedEquilibrium, prior: Prior, report: &mut Report) {
    let m = check_mixed_equilibrium(eq, prior, MIXED_GRID);
    report.checks.push(Check::new(&format!("{label}_indifference"), m.max_indifference_dev, MIXED_TOL));
    report.checks.push(Check::new(&format!("{label}_affine"), m.max_affine_dev, MIXED_TOL));
    report.checks.push(Check::new(&format!("{label}_mean"), m.mean_dev, MIXED_TOL));
}

fn mixed(prior: Prior, args: &VerifyArgs, report: &mut Report) -> Result<(), Failure> {
    if args.outside < 0.0 {
        return Err(flexsearch::Error::NegativeOutside { outside: args.outside }.into());
    }
    let mut ran = false;
    if prior.mu > args.outside {
        mixed_checks("monopoly", &monopoly_mixed_solve(prior, args.outside)?, prior, report);
        ran = true;
    }
    if let Some(c) = args.c {
        let params = ModelParams::new(prior.mu, c, prior.kappa)?;
        if params.mu > 0.0 {
            mixed_checks("competition", &competition_hidden_solve(&params)?, prior, report);
            ran = true;
        }
    }
    if !ran {
        return Err(invalid("no hidden-price equilibrium with trade at these parameters"));
    }
    Ok(())
}

pub fn run(args: VerifyArgs) -> Result<(String, u8), Failure> {
    let prior = Prior::new(args.mu, args.kappa)?;
    if !args.outside.is_finite() {
        return Err(invalid(format!("outside must be finite, got {}", args.outside)));
    }
    let price = args.price.unwrap_or(args.mu - args.outside);
    if !price.is_finite() {
        return Err(invalid(format!("price must be finite, got {price}")));
    }
    let mut report = Report {
        suite: args.suite,
        inputs: Inputs {
            mu: args.mu,
            c: args.c,
            kappa: args.kappa,
            outside: args.outside,
            price,
            sigma: args.sigma,
            dt: args.dt,
            paths: args.paths,
            seed: args.seed,
        },
        walk: None,
        checks: Vec::new(),
        passed: false,
    };
    let all = args.suite == Suite::All;
    if all || args.suite == Suite::Walk {
        walk(prior, price, &args, &mut report)?;
    }
    if all || args.suite == Suite::Envelope {
        envelope(prior, price, args.outside, &mut report)?;
    }
    if all || args.suite == Suite::Mixed {
        mixed(prior, &args, &mut report)?;
    }
    report.passed = report.checks.iter().all(|c| c.passed);
    let code = if report.passed { 0 } else { EXIT_VERIFY };
    let text = serde_json::to_string_pretty(&report).expect("plain data serializes") + "\n";
    Ok((text, code))
}
