use crate::model::Regime;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("search cost c must be positive, got {c}")]
    NonPositiveCost { c: f64 },
    #[error("information friction kappa must be positive, got {kappa}")]
    NonPositiveKappa { kappa: f64 },
    #[error("search cost c = {c} must be below 1/(4 kappa) = {limit}")]
    SearchCostTooHigh { c: f64, limit: f64 },
    #[error("outside option must be nonnegative, got {outside}")]
    NegativeOutside { outside: f64 },
    #[error("inconsistent learning policy: {0}")]
    InconsistentPolicy(String),
    #[error("operation requires regime {expected}, found {found}")]
    WrongRegime { expected: Regime, found: Regime },
    #[error("no trade: prior value {mu} does not exceed the outside option {outside}")]
    NoTrade { mu: f64, outside: f64 },
    #[error("root bracket [{lo}, {hi}] has no sign change (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    BracketFailure { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("barriers must satisfy u_low < start < u_high, got {u_low} < {start} < {u_high}")]
    InvalidBarriers { start: f64, u_low: f64, u_high: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("query point {at} outside the sampled span [{lo}, {hi}]")]
    OutOfRange { at: f64, lo: f64, hi: f64 },
    #[error("envelope needs at least 3 points sorted by strictly increasing u: {0}")]
    BadPointSet(String),
}
