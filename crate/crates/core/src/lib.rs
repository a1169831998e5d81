//! Consumer search with flexible information acquisition.
//!
//! A consumer learns about a product by running a costly two-point experiment
//! on the valuation, then buys, leaves, or moves on to another firm. This
//! crate solves the learning problem, the pricing equilibria when prices are
//! seen before or only after learning, compares the two, and ships oracles
//! that check the closed forms numerically.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hidden;
pub mod learning;
pub mod model;
pub mod observable;
pub mod roots;
pub mod sweep;
pub mod verify;
pub mod welfare;

pub use error::{Error, Result};
pub use hidden::{
    active_search_region, competition_hidden_solve, h_threshold, hidden_welfare_thresholds, monopoly_mixed_solve,
    solve_competition_lower_price, solve_monopoly_lower_price, MixedEquilibrium,
};
pub use learning::{continuation_value, optimal_policy, policy_cost, StoppingPayoff};
pub use model::{LearningPolicy, ModelParams, Prior, Regime};
pub use observable::{
    competition_solve, consumer_search_value, kappa_case_partition, monopoly_solve, ObservableEquilibrium, StaticParam,
};
pub use sweep::{Market, Point, SweepRow};
pub use welfare::{compare_competition, compare_monopoly, figure_data, Figure, RegimeComparison};
