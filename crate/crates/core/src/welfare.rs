//! Observable versus hidden prices, and the kappa sweeps behind the figures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hidden::{competition_hidden_solve, monopoly_mixed_solve};
use crate::model::{ModelParams, Prior, Regime};
use crate::observable::{competition_solve, monopoly_solve, StaticParam};
use crate::sweep::{run_sweep, Market, Point, SweepRow};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableSide {
    pub regime: Regime,
    pub price: f64,
    pub profit: f64,
    pub consumer_welfare: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HiddenSide {
    pub regime: Regime,
    /// `None` when there is no trade.
    pub p_lower: Option<f64>,
    pub profit: f64,
    pub consumer_welfare: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeComparison {
    pub observable: ObservableSide,
    pub hidden: HiddenSide,
    pub firm_prefers_observable: bool,
    pub consumer_prefers_observable: bool,
}

impl RegimeComparison {
    fn assemble(observable: ObservableSide, hidden: HiddenSide) -> Self {
        let neither = !observable.regime.has_trade() && !hidden.regime.has_trade();
        Self {
            observable,
            hidden,
            firm_prefers_observable: observable.profit >= hidden.profit,
            consumer_prefers_observable: neither || observable.consumer_welfare > hidden.consumer_welfare,
        }
    }

    pub fn any_trade(&self) -> bool {
        self.observable.regime.has_trade() || self.hidden.regime.has_trade()
    }
}

fn no_trade_hidden() -> HiddenSide {
    HiddenSide { regime: Regime::NoTrade, p_lower: None, profit: 0.0, consumer_welfare: 0.0 }
}

/// Monopoly with a zero outside option under both timings.
pub fn compare_monopoly(mu: f64, kappa: f64) -> Result<RegimeComparison> {
    let prior = Prior::new(mu, kappa)?;
    let obs = monopoly_solve(prior, 0.0)?;
    let hidden = match monopoly_mixed_solve(prior, 0.0) {
        Ok(eq) => HiddenSide {
            regime: eq.regime(),
            p_lower: Some(eq.p_lower),
            profit: eq.profit,
            consumer_welfare: eq.consumer_welfare,
        },
        Err(Error::NoTrade { .. }) => no_trade_hidden(),
        Err(e) => return Err(e),
    };
    Ok(RegimeComparison::assemble(observable_side(obs.regime, obs.price, obs.profit, obs.consumer_welfare), hidden))
}

/// Search market under both timings.
pub fn compare_competition(params: &ModelParams) -> Result<RegimeComparison> {
    let obs = competition_solve(params);
    let hidden = if params.mu > 0.0 {
        let eq = competition_hidden_solve(params)?;
        HiddenSide {
            regime: eq.regime(),
            p_lower: Some(eq.p_lower),
            profit: eq.profit,
            consumer_welfare: eq.consumer_welfare,
        }
    } else {
        no_trade_hidden()
    };
    Ok(RegimeComparison::assemble(observable_side(obs.regime, obs.price, obs.profit, obs.consumer_welfare), hidden))
}

fn observable_side(regime: Regime, price: f64, profit: f64, consumer_welfare: f64) -> ObservableSide {
    ObservableSide { regime, price, profit, consumer_welfare }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Figure {
    /// Search market, observable prices.
    Fig2,
    /// Monopoly, observable and hidden prices (`c` unused).
    Fig3,
    /// Search market, observable and hidden prices.
    Fig4,
}

/// Rows over `kappa_grid` for one figure.
pub fn figure_data(figure: Figure, mu: f64, c: f64, kappa_grid: &[f64]) -> Result<Vec<SweepRow>> {
    let base = Point { mu, c, kappa: f64::NAN, outside: 0.0 };
    let (market, hidden) = match figure {
        Figure::Fig2 => (Market::Competition, false),
        Figure::Fig3 => (Market::Monopoly, true),
        Figure::Fig4 => (Market::Competition, true),
    };
    run_sweep(market, hidden, base, StaticParam::Kappa, kappa_grid)
}
