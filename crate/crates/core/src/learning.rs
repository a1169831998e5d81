//! Optimal information acquisition at a single firm.
//!
//! The consumer faces price `p` with an option worth `a` in hand. Stopping at
//! posterior value `u` pays `max(a, u - p)` minus the posterior-variance cost
//! `kappa (u - mu)^2`; the optimal experiment is the two-point split that
//! supports the concave envelope of that payoff.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{LearningPolicy, Prior};

/// Payoff from stopping information acquisition at posterior value `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingPayoff {
    pub price: f64,
    pub outside: f64,
    pub prior: Prior,
}

impl StoppingPayoff {
    pub fn new(prior: Prior, price: f64, outside: f64) -> Self {
        Self { price, outside, prior }
    }

    pub fn eval(&self, u: f64) -> f64 {
        let cost = self.prior.kappa * (u - self.prior.mu).powi(2);
        if u - self.price <= self.outside {
            self.outside - cost
        } else {
            u - self.price - cost
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyCostReport {
    pub policy: LearningPolicy,
    /// `kappa * E[(x - mu)^2]` under the policy's posterior distribution.
    pub expected_cost: f64,
    pub gross_value: f64,
    pub net_value: f64,
}

/// Optimal action given price and option in hand. Ties at the edges of the
/// learning region resolve to `Learn` with `p_high` equal to 0 or 1.
pub fn optimal_policy(prior: Prior, price: f64, outside: f64) -> LearningPolicy {
    let pivot = outside + price;
    let half = prior.half_span();
    let (u_low, u_high) = (pivot - half, pivot + half);
    if prior.mu < u_low {
        LearningPolicy::TakeOutside
    } else if prior.mu > u_high {
        LearningPolicy::BuyNow
    } else {
        let p_high = 0.5 + 2.0 * prior.kappa * (prior.mu - price - outside);
        LearningPolicy::Learn { u_low, u_high, p_high }
    }
}

/// Value of behaving optimally at the firm.
pub fn continuation_value(prior: Prior, price: f64, outside: f64) -> f64 {
    let half = prior.half_span();
    let pivot = outside + price;
    let mu = prior.mu;
    if mu <= pivot - half {
        outside
    } else if mu >= pivot + half {
        mu - price
    } else {
        let net = mu - price;
        1.0 / (16.0 * prior.kappa) + (net + outside) / 2.0 + prior.kappa * (net - outside).powi(2)
    }
}

/// Ex ante cost and value of following `policy`.
///
/// At `u_high` the consumer buys; at `u_low` the option in hand is kept.
pub fn policy_cost(prior: Prior, policy: LearningPolicy, price: f64, outside: f64) -> Result<PolicyCostReport> {
    let (expected_cost, gross_value) = match policy {
        LearningPolicy::BuyNow => (0.0, prior.mu - price),
        LearningPolicy::TakeOutside => (0.0, outside),
        LearningPolicy::Learn { u_low, u_high, p_high } => {
            if !(0.0..=1.0).contains(&p_high) {
                return Err(Error::InconsistentPolicy(format!("p_high = {p_high} is not a probability")));
            }
            if u_low > u_high {
                return Err(Error::InconsistentPolicy(format!("u_low = {u_low} exceeds u_high = {u_high}")));
            }
            let mean = p_high * u_high + (1.0 - p_high) * u_low;
            let scale = prior.mu.abs().max(u_low.abs()).max(u_high.abs()).max(1.0);
            if (mean - prior.mu).abs() > 1e-12 * scale {
                return Err(Error::InconsistentPolicy(format!(
                    "posterior mean {mean} differs from prior {}",
                    prior.mu
                )));
            }
            let var = p_high * (u_high - prior.mu).powi(2) + (1.0 - p_high) * (u_low - prior.mu).powi(2);
            (prior.kappa * var, p_high * (u_high - price) + (1.0 - p_high) * outside)
        }
    };
    Ok(PolicyCostReport { policy, expected_cost, gross_value, net_value: gross_value - expected_cost })
}
