//! Flat result rows for solves and parameter sweeps, with a fixed CSV layout.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hidden::{competition_hidden_solve, monopoly_mixed_solve};
use crate::model::{ModelParams, Prior, Regime};
use crate::observable::{comparative_static_signs, competition_solve, monopoly_solve, StaticParam};

/// Column order of every CSV file written by this crate.
pub const CSV_COLUMNS: [&str; 20] = [
    "param",
    "value",
    "mu",
    "c",
    "kappa",
    "outside",
    "regime",
    "price",
    "profit",
    "consumer_welfare",
    "stop_probability",
    "expected_duration",
    "price_sign",
    "profit_sign",
    "welfare_sign",
    "hidden_regime",
    "p_lower",
    "p_upper",
    "hidden_profit",
    "hidden_welfare",
];

pub fn csv_header() -> String {
    CSV_COLUMNS.join(",")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Market {
    Competition,
    Monopoly,
}

/// One solved parameter point. Observable-price columns are always filled;
/// hidden-price columns only when requested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: Option<StaticParam>,
    pub value: Option<f64>,
    pub mu: f64,
    /// Absent for the monopoly, which has no search cost.
    pub c: Option<f64>,
    pub kappa: f64,
    pub outside: f64,
    pub regime: Regime,
    pub price: f64,
    pub profit: f64,
    pub consumer_welfare: f64,
    pub stop_probability: Option<f64>,
    pub expected_duration: Option<f64>,
    pub price_sign: Option<i8>,
    pub profit_sign: Option<i8>,
    pub welfare_sign: Option<i8>,
    pub hidden_regime: Option<Regime>,
    pub p_lower: Option<f64>,
    pub p_upper: Option<f64>,
    pub hidden_profit: Option<f64>,
    pub hidden_welfare: Option<f64>,
}

/// Primitives of one point before validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub mu: f64,
    pub c: f64,
    pub kappa: f64,
    pub outside: f64,
}

impl Point {
    pub fn with(&self, which: StaticParam, value: f64) -> Point {
        let mut p = *self;
        match which {
            StaticParam::Mu => p.mu = value,
            StaticParam::C => p.c = value,
            StaticParam::Kappa => p.kappa = value,
        }
        p
    }
}

fn hidden_no_trade(outside: f64) -> (Regime, Option<f64>, Option<f64>, f64, f64) {
    (Regime::NoTrade, None, None, 0.0, outside)
}

/// Solve a single point. `param` names the swept primitive, if any, and
/// selects which comparative-static signs are reported.
pub fn evaluate(market: Market, hidden: bool, point: Point, param: Option<StaticParam>) -> Result<SweepRow> {
    let value = param.map(|p| match p {
        StaticParam::Mu => point.mu,
        StaticParam::C => point.c,
        StaticParam::Kappa => point.kappa,
    });
    let mut row = match market {
        Market::Competition => {
            let params = ModelParams::validate(point.mu, point.c, point.kappa, point.outside)?;
            let eq = competition_solve(&params);
            let signs = param.filter(|_| eq.regime.has_trade()).map(|p| comparative_static_signs(&params, p));
            let mut row =
                base_row(param, value, point, Some(point.c), eq.regime, eq.price, eq.profit, eq.consumer_welfare);
            row.stop_probability = Some(eq.stop_probability);
            row.expected_duration = Some(eq.expected_duration);
            row.price_sign = signs.map(|s| s.price);
            row.profit_sign = signs.map(|s| s.profit);
            row.welfare_sign = signs.map(|s| s.welfare);
            if hidden {
                let (r, lo, hi, profit, welfare) = if params.mu > 0.0 {
                    let eq = competition_hidden_solve(&params)?;
                    (eq.regime(), Some(eq.p_lower), Some(eq.p_upper), eq.profit, eq.consumer_welfare)
                } else {
                    hidden_no_trade(0.0)
                };
                set_hidden(&mut row, r, lo, hi, profit, welfare);
            }
            row
        }
        Market::Monopoly => {
            if param == Some(StaticParam::C) {
                return Err(Error::InvalidConfig("the monopoly has no search cost to vary".into()));
            }
            let prior = Prior::new(point.mu, point.kappa)?;
            let eq = monopoly_solve(prior, point.outside)?;
            let mut row = base_row(param, value, point, None, eq.regime, eq.price, eq.profit, eq.consumer_welfare);
            row.stop_probability = Some(eq.stop_probability);
            row.expected_duration = Some(eq.expected_duration);
            if hidden {
                let (r, lo, hi, profit, welfare) = match monopoly_mixed_solve(prior, point.outside) {
                    Ok(eq) => (eq.regime(), Some(eq.p_lower), Some(eq.p_upper), eq.profit, eq.consumer_welfare),
                    Err(Error::NoTrade { .. }) => hidden_no_trade(point.outside),
                    Err(e) => return Err(e),
                };
                set_hidden(&mut row, r, lo, hi, profit, welfare);
            }
            row
        }
    };
    if market == Market::Competition {
        row.outside = 0.0;
    }
    Ok(row)
}

#[allow(clippy::too_many_arguments)]
fn base_row(
    param: Option<StaticParam>,
    value: Option<f64>,
    point: Point,
    c: Option<f64>,
    regime: Regime,
    price: f64,
    profit: f64,
    consumer_welfare: f64,
) -> SweepRow {
    SweepRow {
        param,
        value,
        mu: point.mu,
        c,
        kappa: point.kappa,
        outside: point.outside,
        regime,
        price,
        profit,
        consumer_welfare,
        stop_probability: None,
        expected_duration: None,
        price_sign: None,
        profit_sign: None,
        welfare_sign: None,
        hidden_regime: None,
        p_lower: None,
        p_upper: None,
        hidden_profit: None,
        hidden_welfare: None,
    }
}

fn set_hidden(row: &mut SweepRow, regime: Regime, lo: Option<f64>, hi: Option<f64>, profit: f64, welfare: f64) {
    row.hidden_regime = Some(regime);
    row.p_lower = lo;
    row.p_upper = hi;
    row.hidden_profit = Some(profit);
    row.hidden_welfare = Some(welfare);
}

/// Evenly spaced (or log-spaced) grid of `steps` points from `from` to `to`.
pub fn grid(from: f64, to: f64, steps: usize, log: bool) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidConfig(format!("a sweep needs at least 2 steps, got {steps}")));
    }
    if !from.is_finite() || !to.is_finite() {
        return Err(Error::InvalidConfig(format!("grid ends must be finite, got {from} and {to}")));
    }
    if log && !(from > 0.0 && to > 0.0) {
        return Err(Error::InvalidConfig(format!("log grid needs positive ends, got {from} and {to}")));
    }
    let last = (steps - 1) as f64;
    let mix = |a: f64, b: f64, i: usize| (a * (last - i as f64) + b * i as f64) / last;
    Ok((0..steps)
        .map(|i| {
            if i == 0 {
                from
            } else if i == steps - 1 {
                to
            } else if log {
                mix(from.ln(), to.ln(), i).exp()
            } else {
                mix(from, to, i)
            }
        })
        .collect())
}

/// Solve every grid point in parallel; rows come back in grid order. The
/// first invalid point (in grid order) is reported with its index and value.
pub fn run_sweep(
    market: Market,
    hidden: bool,
    base: Point,
    vary: StaticParam,
    values: &[f64],
) -> Result<Vec<SweepRow>> {
    let results: Vec<Result<SweepRow>> =
        values.par_iter().map(|&v| evaluate(market, hidden, base.with(vary, v), Some(vary))).collect();
    results
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.map_err(|e| Error::InvalidConfig(format!("grid point {i} ({} = {}): {e}", vary.name(), values[i])))
        })
        .collect()
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt<T>(x: Option<T>, f: impl Fn(T) -> String) -> String {
    x.map(f).unwrap_or_default()
}

impl SweepRow {
    pub fn to_csv_record(&self) -> String {
        let fields = [
            opt(self.param, |p| p.name().to_string()),
            opt(self.value, num),
            num(self.mu),
            opt(self.c, num),
            num(self.kappa),
            num(self.outside),
            self.regime.label().to_string(),
            num(self.price),
            num(self.profit),
            num(self.consumer_welfare),
            opt(self.stop_probability, num),
            opt(self.expected_duration, num),
            opt(self.price_sign, |s| s.to_string()),
            opt(self.profit_sign, |s| s.to_string()),
            opt(self.welfare_sign, |s| s.to_string()),
            opt(self.hidden_regime, |r| r.label().to_string()),
            opt(self.p_lower, num),
            opt(self.p_upper, num),
            opt(self.hidden_profit, num),
            opt(self.hidden_welfare, num),
        ];
        fields.join(",")
    }

    pub fn from_csv_record(line: &str) -> Result<Self> {
        let cells: Vec<&str> = line.trim_end_matches(['\r', '\n']).split(',').collect();
        if cells.len() != CSV_COLUMNS.len() {
            return Err(Error::InvalidConfig(format!("expected {} columns, found {}", CSV_COLUMNS.len(), cells.len())));
        }
        let bad = |i: usize| Error::InvalidConfig(format!("bad {} cell {:?}", CSV_COLUMNS[i], cells[i]));
        let f = |i: usize| cells[i].parse::<f64>().map_err(|_| bad(i));
        let of = |i: usize| if cells[i].is_empty() { Ok(None) } else { f(i).map(Some) };
        let os = |i: usize| -> Result<Option<i8>> {
            if cells[i].is_empty() {
                Ok(None)
            } else {
                cells[i].parse::<i8>().map(Some).map_err(|_| bad(i))
            }
        };
        let regime = |i: usize| Regime::from_label(cells[i]).ok_or_else(|| bad(i));
        let param =
            if cells[0].is_empty() { None } else { Some(StaticParam::from_name(cells[0]).ok_or_else(|| bad(0))?) };
        Ok(SweepRow {
            param,
            value: of(1)?,
            mu: f(2)?,
            c: of(3)?,
            kappa: f(4)?,
            outside: f(5)?,
            regime: regime(6)?,
            price: f(7)?,
            profit: f(8)?,
            consumer_welfare: f(9)?,
            stop_probability: of(10)?,
            expected_duration: of(11)?,
            price_sign: os(12)?,
            profit_sign: os(13)?,
            welfare_sign: os(14)?,
            hidden_regime: if cells[15].is_empty() { None } else { Some(regime(15)?) },
            p_lower: of(16)?,
            p_upper: of(17)?,
            hidden_profit: of(18)?,
            hidden_welfare: of(19)?,
        })
    }
}

/// Header line followed by one record per row, LF-terminated.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = csv_header();
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_record());
        out.push('\n');
    }
    out
}
