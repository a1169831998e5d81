//! Model primitives shared by every solver.
//!
//! Only the ratio `kappa = gamma / sigma^2` enters the solvers; the flow cost
//! and diffusion scale appear only in the random-walk oracle configuration.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Validated model primitives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Prior (baseline) product value.
    pub mu: f64,
    /// Per-visit search cost.
    pub c: f64,
    /// Cost per unit of posterior variance.
    pub kappa: f64,
    /// Exogenous outside option.
    pub outside: f64,
}

/// The part of the primitives a single-firm learning problem needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prior {
    pub mu: f64,
    pub kappa: f64,
}

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}

impl Prior {
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        finite("mu", mu)?;
        finite("kappa", kappa)?;
        if kappa <= 0.0 {
            return Err(Error::NonPositiveKappa { kappa });
        }
        Ok(Self { mu, kappa })
    }

    /// Half-width `1/(4 kappa)` of the learning region around `a + p`.
    pub fn half_span(&self) -> f64 {
        0.25 / self.kappa
    }
}

impl ModelParams {
    /// Validates raw primitives, naming the first violated constraint.
    pub fn validate(mu: f64, c: f64, kappa: f64, outside: f64) -> Result<Self> {
        finite("mu", mu)?;
        finite("c", c)?;
        finite("kappa", kappa)?;
        finite("outside", outside)?;
        if c <= 0.0 {
            return Err(Error::NonPositiveCost { c });
        }
        if kappa <= 0.0 {
            return Err(Error::NonPositiveKappa { kappa });
        }
        if outside < 0.0 {
            return Err(Error::NegativeOutside { outside });
        }
        let limit = 1.0 / (4.0 * kappa);
        if c >= limit {
            return Err(Error::SearchCostTooHigh { c, limit });
        }
        Ok(Self { mu, c, kappa, outside })
    }

    /// Shorthand for `validate(mu, c, kappa, 0.0)`.
    pub fn new(mu: f64, c: f64, kappa: f64) -> Result<Self> {
        Self::validate(mu, c, kappa, 0.0)
    }

    /// Re-runs validation on an existing record.
    pub fn revalidate(&self) -> Result<Self> {
        Self::validate(self.mu, self.c, self.kappa, self.outside)
    }

    pub fn prior(&self) -> Prior {
        Prior { mu: self.mu, kappa: self.kappa }
    }

    /// `sqrt(c / kappa)`: the active-search equilibrium price and the
    /// distance from the prior down to the low posterior.
    pub fn search_markup(&self) -> f64 {
        (self.c / self.kappa).sqrt()
    }

    /// `2 sqrt(c kappa)`, strictly below one for valid parameters.
    pub fn stop_probability(&self) -> f64 {
        2.0 * (self.c * self.kappa).sqrt()
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::validate(mu, self.c, self.kappa, self.outside)
    }

    pub fn with_c(&self, c: f64) -> Result<Self> {
        Self::validate(self.mu, c, self.kappa, self.outside)
    }

    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        Self::validate(self.mu, self.c, kappa, self.outside)
    }
}

/// Market outcome classification.
///
/// When a point sits on a boundary the earlier variant in
/// [`Regime::PRIORITY`] wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    NoTrade,
    LearnNoSearch,
    SearchAndLearn,
    /// Monopoly only: the price is low enough that the consumer buys without learning.
    BuyNoLearn,
}

impl Regime {
    pub const PRIORITY: [Regime; 3] = [Regime::SearchAndLearn, Regime::LearnNoSearch, Regime::NoTrade];

    pub fn label(&self) -> &'static str {
        match self {
            Regime::NoTrade => "no_trade",
            Regime::LearnNoSearch => "learn_no_search",
            Regime::SearchAndLearn => "search_and_learn",
            Regime::BuyNoLearn => "buy_no_learn",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "no_trade" => Some(Regime::NoTrade),
            "learn_no_search" => Some(Regime::LearnNoSearch),
            "search_and_learn" => Some(Regime::SearchAndLearn),
            "buy_no_learn" => Some(Regime::BuyNoLearn),
            _ => None,
        }
    }

    pub fn has_trade(&self) -> bool {
        !matches!(self, Regime::NoTrade)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The consumer's optimal action at one firm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum LearningPolicy {
    BuyNow,
    TakeOutside,
    /// Two-point experiment: stop at `u_low` (take the option in hand) or
    /// at `u_high` (buy), reaching `u_high` with probability `p_high`.
    Learn {
        u_low: f64,
        u_high: f64,
        p_high: f64,
    },
}

impl LearningPolicy {
    /// Mean of the posterior distribution; `None` for the corner actions.
    pub fn posterior_mean(&self) -> Option<f64> {
        match *self {
            LearningPolicy::Learn { u_low, u_high, p_high } => Some(p_high * u_high + (1.0 - p_high) * u_low),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_interior_point() {
        let p = ModelParams::validate(1.0, 0.01, 1.0, 0.0).unwrap();
        assert_eq!(p.mu, 1.0);
        assert!(p.stop_probability() < 1.0);
    }

    #[test]
    fn rejects_search_cost_at_or_above_limit() {
        assert_eq!(ModelParams::validate(1.0, 0.3, 1.0, 0.0), Err(Error::SearchCostTooHigh { c: 0.3, limit: 0.25 }));
        assert!(matches!(ModelParams::validate(1.0, 0.25, 1.0, 0.0), Err(Error::SearchCostTooHigh { .. })));
    }

    #[test]
    fn negative_prior_is_allowed() {
        assert!(ModelParams::validate(-0.5, 0.01, 1.0, 0.0).is_ok());
    }

    #[test]
    fn names_each_violated_constraint() {
        assert!(matches!(ModelParams::validate(1.0, 0.0, 1.0, 0.0), Err(Error::NonPositiveCost { .. })));
        assert!(matches!(ModelParams::validate(1.0, -1.0, 1.0, 0.0), Err(Error::NonPositiveCost { .. })));
        assert!(matches!(ModelParams::validate(1.0, 0.01, 0.0, 0.0), Err(Error::NonPositiveKappa { .. })));
        assert!(matches!(ModelParams::validate(1.0, 0.01, 1.0, -0.1), Err(Error::NegativeOutside { .. })));
        assert!(matches!(ModelParams::validate(f64::NAN, 0.01, 1.0, 0.0), Err(Error::NonFinite { name: "mu", .. })));
    }

    #[test]
    fn regime_labels_round_trip() {
        for r in [Regime::NoTrade, Regime::LearnNoSearch, Regime::SearchAndLearn, Regime::BuyNoLearn] {
            assert_eq!(Regime::from_label(r.label()), Some(r));
        }
    }
}
