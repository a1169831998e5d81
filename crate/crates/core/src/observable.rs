//! Prices observed on arrival: the consumer search protocol, monopoly
//! pricing, the symmetric pure-strategy market equilibrium and its
//! comparative statics.
//!
//! The competitive market normalises the consumer's exogenous outside option
//! to zero; `ModelParams::outside` is read only by the monopoly solvers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learning::continuation_value;
use crate::model::{ModelParams, Prior, Regime};

/// Consumer's value from optimal search when every firm charges `price`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsumerSearchValue {
    pub regime: Regime,
    pub value: f64,
}

/// Observable-price outcome. No-trade points report zeros.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableEquilibrium {
    pub regime: Regime,
    pub price: f64,
    pub profit: f64,
    pub consumer_welfare: f64,
    /// Probability that the consumer stops searching at the firm currently visited.
    pub stop_probability: f64,
    /// Expected number of firms visited.
    pub expected_duration: f64,
}

impl ObservableEquilibrium {
    fn no_trade() -> Self {
        Self {
            regime: Regime::NoTrade,
            price: 0.0,
            profit: 0.0,
            consumer_welfare: 0.0,
            stop_probability: 0.0,
            expected_duration: 0.0,
        }
    }
}

/// Lower edge of the learning region in `mu`: `-1/(4 kappa)`.
pub fn trade_threshold(kappa: f64) -> f64 {
    -0.25 / kappa
}

/// Prior above which the market equilibrium involves active search:
/// `2 sqrt(c/kappa) - 1/(4 kappa)`.
pub fn active_search_threshold(params: &ModelParams) -> f64 {
    2.0 * params.search_markup() - 0.25 / params.kappa
}

pub fn consumer_search_value(params: &ModelParams, price: f64) -> ConsumerSearchValue {
    let net = params.mu - price;
    let k = params.kappa;
    let s = params.search_markup();
    if net >= s - 0.25 / k {
        ConsumerSearchValue { regime: Regime::SearchAndLearn, value: net + params.c + 0.25 / k - s }
    } else if net >= -0.25 / k {
        ConsumerSearchValue { regime: Regime::LearnNoSearch, value: 1.0 / (16.0 * k) + net / 2.0 + k * net * net }
    } else {
        ConsumerSearchValue { regime: Regime::NoTrade, value: 0.0 }
    }
}

/// Residual of the stationary search recursion `Phi = W*(mu, p; Phi - c)`
/// at the closed-form active-search value.
pub fn fixed_point_check(params: &ModelParams, price: f64) -> Result<f64> {
    let csv = consumer_search_value(params, price);
    if csv.regime != Regime::SearchAndLearn {
        return Err(Error::WrongRegime { expected: Regime::SearchAndLearn, found: csv.regime });
    }
    let phi = csv.value;
    Ok((phi - continuation_value(params.prior(), price, phi - params.c)).abs())
}

/// Monopoly pricing with observable price and an outside option in hand.
pub fn monopoly_solve(prior: Prior, outside: f64) -> Result<ObservableEquilibrium> {
    if !(outside >= 0.0) {
        return Err(Error::NegativeOutside { outside });
    }
    let k = prior.kappa;
    let net = prior.mu - outside;
    if net >= 0.75 / k {
        let price = net - 0.25 / k;
        Ok(ObservableEquilibrium {
            regime: Regime::BuyNoLearn,
            price,
            profit: price,
            consumer_welfare: 0.25 / k + outside,
            stop_probability: 1.0,
            expected_duration: 1.0,
        })
    } else if net >= -0.25 / k {
        let profit = (1.0 + 4.0 * k * net).powi(2) / (32.0 * k);
        Ok(ObservableEquilibrium {
            regime: Regime::LearnNoSearch,
            price: 0.125 / k + net / 2.0,
            profit,
            consumer_welfare: profit / 2.0 + outside,
            stop_probability: 1.0,
            expected_duration: 1.0,
        })
    } else {
        Ok(ObservableEquilibrium::no_trade())
    }
}

/// Symmetric pure-strategy equilibrium of the search market.
pub fn competition_solve(params: &ModelParams) -> ObservableEquilibrium {
    let k = params.kappa;
    let mu = params.mu;
    if mu >= active_search_threshold(params) {
        let s = params.search_markup();
        let stop = params.stop_probability();
        ObservableEquilibrium {
            regime: Regime::SearchAndLearn,
            price: s,
            profit: 2.0 * params.c,
            consumer_welfare: mu + 0.25 / k + params.c - 2.0 * s,
            stop_probability: stop,
            expected_duration: 1.0 / stop,
        }
    } else if mu >= trade_threshold(k) {
        let profit = (1.0 + 4.0 * k * mu).powi(2) / (32.0 * k);
        ObservableEquilibrium {
            regime: Regime::LearnNoSearch,
            price: 0.125 / k + mu / 2.0,
            profit,
            consumer_welfare: profit / 2.0,
            stop_probability: 1.0,
            expected_duration: 1.0,
        }
    } else {
        ObservableEquilibrium::no_trade()
    }
}

/// Profit of a firm deviating to `price` when the market charges
/// `conjectured` and consumers search actively.
pub fn deviation_profit(params: &ModelParams, conjectured: f64, price: f64) -> f64 {
    let s = params.search_markup();
    let buy = (2.0 * params.kappa * (conjectured - price + s)).clamp(0.0, 1.0);
    price * buy
}

/// Largest gain from a unilateral price deviation over an evenly spaced grid
/// on `[0, 2 sqrt(c/kappa)]` (plus the equilibrium price itself). A
/// non-positive result certifies the equilibrium price on that grid.
pub fn equilibrium_foc_check(params: &ModelParams, grid_n: usize) -> Result<f64> {
    let eq = competition_solve(params);
    if eq.regime != Regime::SearchAndLearn {
        return Err(Error::WrongRegime { expected: Regime::SearchAndLearn, found: eq.regime });
    }
    let p_eq = eq.price;
    let base = deviation_profit(params, p_eq, p_eq);
    let hi = p_eq + params.search_markup();
    let n = grid_n.max(2);
    let gain = (0..n)
        .map(|i| hi * i as f64 / (n - 1) as f64)
        .chain(std::iter::once(p_eq))
        .map(|p| deviation_profit(params, p_eq, p) - base)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(gain)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KappaCase {
    /// `mu > 0`, `c <= mu/4`: active search for every admissible kappa.
    Case1,
    /// `mu > 0`, `mu/4 < c < mu/3`: active search for low and high kappa only.
    Case2,
    /// `mu >= 0`, `c >= mu/3`: active search only for low kappa.
    Case3,
    /// `mu < 0`: active search only for low kappa.
    Case4,
}

/// A kappa interval with open/closed ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl KappaInterval {
    pub fn contains(&self, kappa: f64) -> bool {
        let above = if self.lo_closed { kappa >= self.lo } else { kappa > self.lo };
        let below = if self.hi_closed { kappa <= self.hi } else { kappa < self.hi };
        above && below
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaCasePartition {
    pub case_id: KappaCase,
    pub kappa_low_obs: Option<f64>,
    pub kappa_high_obs: Option<f64>,
    /// Kappa values, within `(0, 1/(4c))`, where the market equilibrium has active search.
    pub active_intervals: Vec<KappaInterval>,
}

impl KappaCasePartition {
    pub fn is_active(&self, kappa: f64) -> bool {
        self.active_intervals.iter().any(|iv| iv.contains(kappa))
    }
}

/// Splits the admissible kappa range `(0, 1/(4c))` by whether
/// `mu >= 2 sqrt(c/kappa) - 1/(4 kappa)` holds.
pub fn kappa_case_partition(mu: f64, c: f64) -> Result<KappaCasePartition> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::NonPositiveCost { c });
    }
    if !mu.is_finite() {
        return Err(Error::NonFinite { name: "mu", value: mu });
    }
    let kappa_max = 0.25 / c;
    let whole = KappaInterval { lo: 0.0, hi: kappa_max, lo_closed: false, hi_closed: false };
    let case_id = if mu < 0.0 {
        KappaCase::Case4
    } else if mu > 0.0 && c <= mu / 4.0 {
        KappaCase::Case1
    } else if mu > 0.0 && c < mu / 3.0 {
        KappaCase::Case2
    } else {
        KappaCase::Case3
    };
    if case_id == KappaCase::Case1 {
        return Ok(KappaCasePartition {
            case_id,
            kappa_low_obs: None,
            kappa_high_obs: None,
            active_intervals: vec![whole],
        });
    }
    // Smaller root in sqrt(kappa) of mu t^2 - 2 sqrt(c) t + 1/4, rationalised
    // so it stays finite at mu = 0.
    let root = (4.0 * c - mu).sqrt();
    let kappa_low = 1.0 / (4.0 * (2.0 * c.sqrt() + root).powi(2));
    let low = KappaInterval { lo: 0.0, hi: kappa_low, lo_closed: false, hi_closed: true };
    if case_id == KappaCase::Case2 {
        let kappa_high = (8.0 * c - mu + 4.0 * (root * root * c).sqrt()) / (4.0 * mu * mu);
        let high = KappaInterval { lo: kappa_high, hi: kappa_max, lo_closed: true, hi_closed: false };
        Ok(KappaCasePartition {
            case_id,
            kappa_low_obs: Some(kappa_low),
            kappa_high_obs: Some(kappa_high),
            active_intervals: vec![low, high],
        })
    } else {
        Ok(KappaCasePartition {
            case_id,
            kappa_low_obs: Some(kappa_low),
            kappa_high_obs: None,
            active_intervals: vec![low],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StaticParam {
    Mu,
    C,
    Kappa,
}

impl StaticParam {
    pub fn name(&self) -> &'static str {
        match self {
            StaticParam::Mu => "mu",
            StaticParam::C => "c",
            StaticParam::Kappa => "kappa",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "mu" => Some(StaticParam::Mu),
            "c" => Some(StaticParam::C),
            "kappa" => Some(StaticParam::Kappa),
            _ => None,
        }
    }
}

/// Signs (-1, 0, +1) of the derivatives of equilibrium outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignPrediction {
    pub price: i8,
    pub profit: i8,
    pub welfare: i8,
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Analytic signs of the derivatives of the market equilibrium's price,
/// profit and consumer welfare with respect to one primitive.
pub fn comparative_static_signs(params: &ModelParams, which: StaticParam) -> SignPrediction {
    let eq = competition_solve(params);
    let (k, mu, c) = (params.kappa, params.mu, params.c);
    match (eq.regime, which) {
        (Regime::SearchAndLearn, StaticParam::Mu) => SignPrediction { price: 0, profit: 0, welfare: 1 },
        (Regime::SearchAndLearn, StaticParam::C) => SignPrediction { price: 1, profit: 1, welfare: -1 },
        (Regime::SearchAndLearn, StaticParam::Kappa) => {
            SignPrediction { price: -1, profit: 0, welfare: sign(16.0 * c * k - 1.0) }
        }
        (Regime::LearnNoSearch, StaticParam::Mu) => {
            let d = sign(1.0 + 4.0 * k * mu);
            SignPrediction { price: 1, profit: d, welfare: d }
        }
        (Regime::LearnNoSearch, StaticParam::C) => SignPrediction { price: 0, profit: 0, welfare: 0 },
        (Regime::LearnNoSearch, StaticParam::Kappa) => {
            let d = sign(4.0 * k * mu.abs() - 1.0);
            SignPrediction { price: -1, profit: d, welfare: d }
        }
        _ => SignPrediction { price: 0, profit: 0, welfare: 0 },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObfuscationOutcome {
    pub kappa_star: f64,
    pub profit_star: f64,
    pub is_corner: bool,
}

/// Best friction level for a firm that picks its own kappa from `interval`
/// (and then prices as a monopolist facing the market continuation value).
pub fn obfuscation_corner(params: &ModelParams, interval: [f64; 2], grid_n: usize) -> Result<ObfuscationOutcome> {
    let [lo, hi] = interval;
    if !(lo > 0.0) || !(hi >= lo) || !hi.is_finite() {
        return Err(Error::InvalidParams(format!("kappa interval [{lo}, {hi}] must satisfy 0 < lo <= hi < inf")));
    }
    if params.c >= 0.25 / hi {
        return Err(Error::SearchCostTooHigh { c: params.c, limit: 0.25 / hi });
    }
    let eq = competition_solve(params);
    let held = if eq.regime == Regime::SearchAndLearn { eq.consumer_welfare - params.c } else { 0.0 };
    let n = if hi > lo { grid_n.max(2) } else { 1 };
    let profit_at = |kappa: f64| -> Result<f64> { Ok(monopoly_solve(Prior::new(params.mu, kappa)?, held)?.profit) };
    let mut best = (0usize, lo, f64::NEG_INFINITY);
    for i in 0..n {
        let kappa = if n == 1 {
            lo
        } else if i == n - 1 {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        };
        let profit = profit_at(kappa)?;
        if profit > best.2 {
            best = (i, kappa, profit);
        }
    }
    let end_best = profit_at(lo)?.max(profit_at(hi)?);
    Ok(ObfuscationOutcome {
        kappa_star: best.1,
        profit_star: best.2,
        is_corner: best.0 == 0 || best.0 == n - 1 || end_best >= best.2,
    })
}
