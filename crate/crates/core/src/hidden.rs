//! Prices observed only after learning.
//!
//! No pure-strategy equilibrium with trade exists, so firms mix uniformly over
//! `[p_lower, p_lower + 1/(2 kappa)]` and consumers' posterior values follow a
//! truncated Pareto law with an atom at the top, which makes demand unit
//! elastic on the price support. The lower price bounds solve implicit
//! equations handled here by bisection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, Prior, Regime};
use crate::roots::{bisect, golden_section_min};

const ROOT_REL_TOL: f64 = 4.0 * f64::EPSILON;

/// `p ln(1 + 1/(2 kappa p)) + p - (mu - a)`; its positive root is the
/// monopoly lower price bound.
pub fn iota(p: f64, mu: f64, kappa: f64, outside: f64) -> f64 {
    p * (1.0 / (2.0 * kappa * p)).ln_1p() + p - (mu - outside)
}

/// `p ln(1 + 1/(2 kappa p)) - sqrt(c/kappa)`; its positive root is the
/// lower price bound of the search market.
pub fn phi(p: f64, c: f64, kappa: f64) -> f64 {
    p * (1.0 / (2.0 * kappa * p)).ln_1p() - (c / kappa).sqrt()
}

/// Consumer's net payoff as an affine function `slope * x + intercept` of the
/// realised posterior value on the equilibrium support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineValueLine {
    pub slope: f64,
    pub intercept: f64,
}

impl AffineValueLine {
    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Mixed-strategy equilibrium with hidden prices.
///
/// Values are distributed as `F(x) = 1 - (x_lower - a)/(x - a)` on
/// `[x_lower, x_upper)` with the remaining mass as an atom at `x_upper`, where
/// `a = effective_outside`. Prices are uniform with CDF
/// `G(p) = 2 kappa (p - p_lower)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedEquilibrium {
    pub mu: f64,
    pub kappa: f64,
    pub p_lower: f64,
    pub p_upper: f64,
    pub x_lower: f64,
    pub x_upper: f64,
    /// Outside option in the monopoly, continuation value `Phi - c` in the market.
    pub effective_outside: f64,
    pub profit: f64,
    pub consumer_welfare: f64,
    pub value_line: AffineValueLine,
    pub active_search: bool,
    /// Constant profit earned at every price in the support.
    pub indifference_profit: f64,
}

impl MixedEquilibrium {
    fn assemble(mu: f64, kappa: f64, p_lower: f64, effective_outside: f64, active_search: bool) -> Self {
        let x_lower = p_lower + effective_outside;
        let p_upper = p_lower + 0.5 / kappa;
        let value_line = AffineValueLine {
            slope: 2.0 * kappa * (mu - x_lower),
            intercept: kappa * (x_lower * x_lower - mu * mu) + effective_outside,
        };
        Self {
            mu,
            kappa,
            p_lower,
            p_upper,
            x_lower,
            x_upper: p_upper + effective_outside,
            effective_outside,
            profit: p_lower,
            consumer_welfare: kappa * (mu - x_lower).powi(2) + effective_outside,
            value_line,
            active_search,
            indifference_profit: x_lower - effective_outside,
        }
    }

    pub fn regime(&self) -> Regime {
        if self.active_search {
            Regime::SearchAndLearn
        } else {
            Regime::LearnNoSearch
        }
    }

    /// Probability mass at `x_upper`.
    pub fn atom_mass(&self) -> f64 {
        (self.x_lower - self.effective_outside) / (self.x_upper - self.effective_outside)
    }

    /// Right-continuous CDF of posterior values.
    pub fn value_cdf(&self, x: f64) -> f64 {
        if x < self.x_lower {
            0.0
        } else if x < self.x_upper {
            1.0 - (self.x_lower - self.effective_outside) / (x - self.effective_outside)
        } else {
            1.0
        }
    }

    /// Left limit `F(x-)` of the value CDF.
    pub fn value_cdf_left(&self, x: f64) -> f64 {
        if x <= self.x_lower {
            0.0
        } else if x <= self.x_upper {
            1.0 - (self.x_lower - self.effective_outside) / (x - self.effective_outside)
        } else {
            1.0
        }
    }

    /// Smallest `x` with `F(x) >= q`.
    pub fn value_quantile(&self, q: f64) -> f64 {
        let q = q.clamp(0.0, 1.0);
        if q > 1.0 - self.atom_mass() {
            self.x_upper
        } else {
            self.effective_outside + (self.x_lower - self.effective_outside) / (1.0 - q)
        }
    }

    pub fn price_cdf(&self, p: f64) -> f64 {
        (2.0 * self.kappa * (p - self.p_lower)).clamp(0.0, 1.0)
    }

    pub fn price_quantile(&self, q: f64) -> f64 {
        self.p_lower + q.clamp(0.0, 1.0) / (2.0 * self.kappa)
    }
}

/// Lower bound of the monopoly price distribution.
pub fn solve_monopoly_lower_price(prior: Prior, outside: f64) -> Result<f64> {
    let gap = prior.mu - outside;
    if !(gap > 0.0) {
        return Err(Error::NoTrade { mu: prior.mu, outside });
    }
    let f = |p: f64| iota(p, prior.mu, prior.kappa, outside);
    bisect(f, 1e-12 * gap, gap, ROOT_REL_TOL)
}

pub fn monopoly_mixed_solve(prior: Prior, outside: f64) -> Result<MixedEquilibrium> {
    if outside < 0.0 {
        return Err(Error::NegativeOutside { outside });
    }
    let p_lower = solve_monopoly_lower_price(prior, outside)?;
    Ok(MixedEquilibrium::assemble(prior.mu, prior.kappa, p_lower, outside, false))
}

/// Lower bound of the market price distribution; exists iff `c < 1/(4 kappa)`.
pub fn solve_competition_lower_price(c: f64, kappa: f64) -> Result<f64> {
    if !(c > 0.0 && kappa > 0.0 && c.is_finite() && kappa.is_finite()) || c >= 0.25 / kappa {
        return Err(Error::InvalidParams(format!("need 0 < c < 1/(4 kappa), got c = {c}, kappa = {kappa}")));
    }
    let s = (c / kappa).sqrt();
    let f = |p: f64| phi(p, c, kappa);
    let mut hi = s;
    while f(hi) <= 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::BracketFailure { lo: s, hi, f_lo: f(s), f_hi: f64::NAN });
        }
    }
    bisect(f, 1e-12 * s, hi, ROOT_REL_TOL)
}

/// Search-market equilibrium with hidden prices. Falls back to the monopoly
/// solution with a zero outside option when `mu - sqrt(c/kappa) <= p_lower`.
pub fn competition_hidden_solve(params: &ModelParams) -> Result<MixedEquilibrium> {
    if !(params.mu > 0.0) {
        return Err(Error::NoTrade { mu: params.mu, outside: 0.0 });
    }
    let s = params.search_markup();
    let p_lower = solve_competition_lower_price(params.c, params.kappa)?;
    if params.mu - s > p_lower {
        let held = params.mu - p_lower - s;
        Ok(MixedEquilibrium::assemble(params.mu, params.kappa, p_lower, held, true))
    } else {
        monopoly_mixed_solve(params.prior(), 0.0)
    }
}

/// `p_lower(c, kappa) + sqrt(c/kappa)`: active search holds iff `mu` exceeds it.
pub fn active_search_bound(c: f64, kappa: f64) -> Result<f64> {
    Ok(solve_competition_lower_price(c, kappa)? + (c / kappa).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActiveSearchRegion {
    /// Smallest prior for which some kappa supports active search.
    pub mu_tilde: f64,
    /// Kappa at which `active_search_bound` is minimal.
    pub kappa_argmin: f64,
    pub kappa_low: Option<f64>,
    pub kappa_high: Option<f64>,
}

impl ActiveSearchRegion {
    pub fn contains(&self, kappa: f64) -> bool {
        match (self.kappa_low, self.kappa_high) {
            (Some(lo), Some(hi)) => kappa > lo && kappa < hi,
            _ => false,
        }
    }
}

/// Number of log-spaced kappa points scanned before golden-section refinement.
pub const REGION_GRID: usize = 512;

pub fn active_search_region(c: f64, mu: f64) -> Result<ActiveSearchRegion> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::NonPositiveCost { c });
    }
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParams(format!("active search needs mu > 0, got {mu}")));
    }
    let kappa_max = 0.25 / c;
    let bound = |kappa: f64| active_search_bound(c, kappa).unwrap_or(f64::INFINITY);

    let (ln_lo, ln_hi) = ((1e-8f64).ln(), (1.0 - 1e-6f64).ln());
    let grid: Vec<f64> = (0..REGION_GRID)
        .map(|i| kappa_max * (ln_lo + (ln_hi - ln_lo) * i as f64 / (REGION_GRID - 1) as f64).exp())
        .collect();
    let values: Vec<f64> = grid.iter().map(|&k| bound(k)).collect();
    let i_min = values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap_or(0);
    let lo = grid[i_min.saturating_sub(1)];
    let hi = grid[(i_min + 1).min(REGION_GRID - 1)];
    let (kappa_argmin, mu_tilde) = golden_section_min(bound, lo, hi, 1e-10);

    if !(mu > mu_tilde) {
        return Ok(ActiveSearchRegion { mu_tilde, kappa_argmin, kappa_low: None, kappa_high: None });
    }
    let excess = |kappa: f64| bound(kappa) - mu;

    let mut left = kappa_argmin;
    while excess(left) <= 0.0 {
        left *= 0.5;
        if left < f64::MIN_POSITIVE {
            return Err(Error::BracketFailure {
                lo: left,
                hi: kappa_argmin,
                f_lo: excess(left),
                f_hi: excess(kappa_argmin),
            });
        }
    }
    let kappa_low = bisect(excess, left, kappa_argmin, 1e-14)?;

    let mut gap = kappa_max - kappa_argmin;
    let mut right = kappa_argmin;
    while excess(right) <= 0.0 {
        gap *= 0.5;
        let next = kappa_max - gap;
        if next <= right || next >= kappa_max {
            return Err(Error::BracketFailure {
                lo: kappa_argmin,
                hi: right,
                f_lo: excess(kappa_argmin),
                f_hi: excess(right),
            });
        }
        right = next;
    }
    let kappa_high = bisect(excess, kappa_argmin, right, 1e-14)?;
    Ok(ActiveSearchRegion { mu_tilde, kappa_argmin, kappa_low: Some(kappa_low), kappa_high: Some(kappa_high) })
}

/// `ln sqrt(c kappa) + 2 - 2 sqrt(c kappa)`; the market lower price falls in
/// kappa exactly where this is non-positive.
pub fn h(c: f64, kappa: f64) -> f64 {
    let s = (c * kappa).sqrt();
    s.ln() + 2.0 - 2.0 * s
}

/// The kappa at which `h(c, .)` crosses zero, i.e. where the market lower
/// price bound is minimised.
pub fn h_threshold(c: f64) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::NonPositiveCost { c });
    }
    let s = bisect(|s: f64| s.ln() + 2.0 - 2.0 * s, 1e-300, 0.5, ROOT_REL_TOL)?;
    Ok(s * s / c)
}

/// Monopoly welfare condition in `z = 2 kappa p_lower`: hidden-price
/// consumer welfare rises with kappa iff this is non-negative.
pub fn monopoly_welfare_condition(z: f64) -> f64 {
    let l = (1.0 / z).ln_1p();
    0.5 * l - 1.0 / ((z + 1.0) * l + z)
}

/// Market welfare condition in `x = kappa p_lower`.
pub fn competition_welfare_condition(x: f64) -> f64 {
    let l = (0.5 / x).ln_1p();
    (1.0 + 0.5 / x) * l + 1.0 - 1.0 / (x * l)
}

/// Root in `kappa * p_lower` of the monopoly welfare condition.
pub fn monopoly_welfare_root() -> Result<f64> {
    Ok(0.5 * bisect(monopoly_welfare_condition, 1e-3, 10.0, ROOT_REL_TOL)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HiddenWelfareThresholds {
    pub monopoly_welfare_increasing: bool,
    pub competition_welfare_increasing: bool,
}

/// Whether consumer welfare with hidden prices rises with kappa, for the
/// monopoly (outside option `params.outside`) and for the search market.
pub fn hidden_welfare_thresholds(params: &ModelParams) -> Result<HiddenWelfareThresholds> {
    let p_m = solve_monopoly_lower_price(params.prior(), params.outside)?;
    let p = solve_competition_lower_price(params.c, params.kappa)?;
    Ok(HiddenWelfareThresholds {
        monopoly_welfare_increasing: monopoly_welfare_condition(2.0 * params.kappa * p_m) >= 0.0,
        competition_welfare_increasing: competition_welfare_condition(params.kappa * p) >= 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prior(mu: f64, kappa: f64) -> Prior {
        Prior::new(mu, kappa).unwrap()
    }

    #[test]
    fn monopoly_lower_price_anchor() {
        let p = solve_monopoly_lower_price(prior(1.0, 1.0), 0.0).unwrap();
        assert!((p - 0.6317).abs() < 1e-3);
        assert!(iota(p, 1.0, 1.0, 0.0).abs() < 1e-12);
    }

    #[test]
    fn no_trade_when_prior_below_option() {
        assert!(matches!(solve_monopoly_lower_price(prior(0.5, 3.0), 0.5), Err(Error::NoTrade { .. })));
        assert!(matches!(monopoly_mixed_solve(prior(0.5, 0.2), 0.5), Err(Error::NoTrade { .. })));
    }

    #[test]
    fn monopoly_lower_price_approaches_net_value_as_kappa_grows() {
        let p = solve_monopoly_lower_price(prior(1.0, 1e6), 0.0).unwrap();
        assert!(p < 1.0 && 1.0 - p < 1e-2);
    }

    #[test]
    fn monopoly_equilibrium_fields() {
        let eq = monopoly_mixed_solve(prior(1.0, 1.0), 0.0).unwrap();
        assert!((eq.profit - 0.6317).abs() < 1e-3);
        assert!((eq.consumer_welfare - 0.1357).abs() < 1e-3);
        assert!((eq.x_upper - 1.1317).abs() < 1e-3);
        assert_eq!(eq.price_cdf(eq.p_lower), 0.0);
        assert_eq!(eq.price_cdf(eq.p_upper), 1.0);
        assert!(!eq.active_search);
        assert_eq!(eq.profit, eq.indifference_profit);
    }

    #[test]
    fn competition_lower_price_anchor() {
        let p = solve_competition_lower_price(0.01, 1.0).unwrap();
        assert!((p - 0.0376).abs() < 1e-3);
        assert!(phi(p, 0.01, 1.0).abs() < 1e-12);
        assert!(phi(2.0 * p, 0.01, 1.0) > 0.0);
        assert!(matches!(solve_competition_lower_price(0.07, 4.0), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn competition_equilibrium_fields() {
        let params = ModelParams::new(1.0, 0.01, 1.0).unwrap();
        let eq = competition_hidden_solve(&params).unwrap();
        assert!(eq.active_search);
        assert!((eq.profit - 0.0376).abs() < 1e-3);
        assert!((eq.consumer_welfare - 0.8724).abs() < 1e-3);
        assert!((eq.x_lower - 0.9).abs() < 1e-12);
        assert!((eq.x_upper - 1.4).abs() < 1e-12);
        assert!((eq.x_lower - (eq.p_lower + eq.effective_outside)).abs() < 1e-15);
    }

    #[test]
    fn competition_falls_back_to_monopoly() {
        let params = ModelParams::new(0.05, 0.01, 1.0).unwrap();
        let eq = competition_hidden_solve(&params).unwrap();
        assert!(!eq.active_search);
        assert_eq!(eq, monopoly_mixed_solve(params.prior(), 0.0).unwrap());
        assert!(matches!(
            competition_hidden_solve(&ModelParams::new(-0.1, 0.01, 1.0).unwrap()),
            Err(Error::NoTrade { .. })
        ));
    }

    #[test]
    fn quantiles_invert_cdfs() {
        let eq = monopoly_mixed_solve(prior(1.0, 1.0), 0.2).unwrap();
        for i in 0..=20 {
            let q = i as f64 / 20.0;
            let p = eq.price_quantile(q);
            assert!((eq.price_cdf(p) - q).abs() < 1e-12);
            let x = eq.value_quantile(q);
            assert!(eq.value_cdf(x) >= q - 1e-12);
        }
        assert_eq!(eq.value_quantile(1.0), eq.x_upper);
        assert!((eq.value_cdf(eq.x_upper) - eq.value_cdf_left(eq.x_upper) - eq.atom_mass()).abs() < 1e-12);
    }

    #[test]
    fn active_search_region_examples() {
        let region = active_search_region(0.01, 1.0).unwrap();
        assert!(active_search_bound(0.01, 1.0).unwrap() < 1.0);
        let (lo, hi) = (region.kappa_low.unwrap(), region.kappa_high.unwrap());
        assert!(lo < 1.0 && 1.0 < hi && hi < 25.0);
        assert!(region.contains(1.0));

        let region = active_search_region(0.01, 0.01).unwrap();
        assert!(region.mu_tilde > 0.01);
        assert_eq!(region.kappa_low, None);
    }

    #[test]
    fn h_threshold_root() {
        let k = h_threshold(0.01).unwrap();
        assert!((k - 4.13).abs() < 1e-2);
        assert!(h(0.01, k).abs() < 1e-12);
        assert!(((0.01 * k).sqrt() - 0.2032).abs() < 1e-4);
    }

    #[test]
    fn welfare_thresholds() {
        let params = ModelParams::new(1.0, 0.01, 1.0).unwrap();
        assert!(!hidden_welfare_thresholds(&params).unwrap().monopoly_welfare_increasing);
        let root = monopoly_welfare_root().unwrap();
        assert!((root - 0.337).abs() < 1e-3);
        assert!(monopoly_welfare_condition(2.0 * root).abs() < 1e-12);
    }
}
