use flexsearch::learning::{continuation_value, optimal_policy, policy_cost, StoppingPayoff};
use flexsearch::model::{LearningPolicy, ModelParams, Prior};
use flexsearch::verify::concave_envelope;
use proptest::prelude::*;

fn valid_params() -> impl Strategy<Value = ModelParams> {
    (-2.0..3.0f64, 0.05..10.0f64, 0.01..0.99f64, 0.0..2.0f64)
        .prop_map(|(mu, kappa, frac, outside)| ModelParams::validate(mu, frac * 0.25 / kappa, kappa, outside).unwrap())
}

fn learning_case() -> impl Strategy<Value = (Prior, f64, f64)> {
    (-2.0..3.0f64, 0.05..10.0f64, -1.0..2.0f64, 0.0..2.0f64)
        .prop_map(|(mu, kappa, price, outside)| (Prior::new(mu, kappa).unwrap(), price, outside))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn validate_is_idempotent(p in valid_params()) {
        prop_assert_eq!(p.revalidate().unwrap(), p);
        prop_assert!(2.0 * (p.c * p.kappa).sqrt() < 1.0);
    }

    #[test]
    fn learning_has_nonnegative_option_value((prior, price, outside) in learning_case()) {
        let w = continuation_value(prior, price, outside);
        prop_assert!(w >= outside.max(prior.mu - price) - 1e-12);
    }

    #[test]
    fn learn_policy_net_value_matches_closed_form((prior, price, outside) in learning_case()) {
        let policy = optimal_policy(prior, price, outside);
        let report = policy_cost(prior, policy, price, outside).unwrap();
        let w = continuation_value(prior, price, outside);
        prop_assert!((report.net_value - w).abs() <= 1e-12 * w.abs().max(1.0));
        if let LearningPolicy::Learn { u_low, u_high, p_high } = policy {
            prop_assert!((0.0..=1.0).contains(&p_high));
            prop_assert!((u_high - u_low - 0.5 / prior.kappa).abs() < 1e-12);
        }
    }

    #[test]
    fn binary_policy_cost_identity(
        mu in -2.0..2.0f64, kappa in 0.1..5.0f64, below in 0.01..1.0f64, above in 0.01..1.0f64,
    ) {
        let prior = Prior::new(mu, kappa).unwrap();
        let (u_low, u_high) = (mu - below, mu + above);
        let p_high = below / (below + above);
        let policy = LearningPolicy::Learn { u_low, u_high, p_high };
        let report = policy_cost(prior, policy, 0.0, 0.0).unwrap();
        let variance = p_high * (u_high - mu).powi(2) + (1.0 - p_high) * (u_low - mu).powi(2);
        prop_assert!((report.expected_cost - kappa * variance).abs() < 1e-12);
        prop_assert!((report.expected_cost - kappa * above * below).abs() < 1e-12);
    }

    #[test]
    fn continuation_value_monotone((prior, price, outside) in learning_case(), dx in 1e-4..0.1f64) {
        let w = continuation_value(prior, price, outside);
        let tol = 1e-12;
        prop_assert!(continuation_value(prior, price + dx, outside) <= w + tol);
        prop_assert!(continuation_value(prior, price, outside + dx) >= w - tol);
        let up = Prior::new(prior.mu + dx, prior.kappa).unwrap();
        prop_assert!(continuation_value(up, price, outside) >= w - tol);
    }

    #[test]
    fn continuation_value_falls_with_kappa_when_learning(
        kappa in 0.05..10.0f64, price in -1.0..2.0f64, outside in 0.0..2.0f64, t in -0.999..0.999f64, dk in 1e-4..0.5f64,
    ) {
        let prior = Prior::new(outside + price + t * 0.25 / kappa, kappa).unwrap();
        let learns = matches!(optimal_policy(prior, price, outside), LearningPolicy::Learn { .. });
        prop_assert!(learns);
        let w = continuation_value(prior, price, outside);
        let stiffer = Prior::new(prior.mu, prior.kappa + dk).unwrap();
        prop_assert!(continuation_value(stiffer, price, outside) <= w + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn closed_form_matches_envelope((prior, price, outside) in learning_case()) {
        let payoff = StoppingPayoff::new(prior, price, outside);
        let half = 2.0 / prior.kappa + (prior.mu - price - outside).abs() + 1.0;
        let (lo, hi) = (prior.mu - half, prior.mu + half);
        let n = 4001;
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let u = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                (u, payoff.eval(u))
            })
            .collect();
        let env = concave_envelope(&pts, prior.mu).unwrap();
        let w = continuation_value(prior, price, outside);
        let h = (hi - lo) / (n - 1) as f64;
        prop_assert!((env - w).abs() <= prior.kappa * h * h + 1e-12, "env {} w {}", env, w);
        prop_assert!(env >= payoff.eval(prior.mu) - 1e-12);
    }
}

#[test]
fn figure_one_example() {
    let prior = Prior::new(1.0, 0.5).unwrap();
    assert_eq!(optimal_policy(prior, 0.5, 0.25), LearningPolicy::Learn { u_low: 0.25, u_high: 1.25, p_high: 0.75 });
    assert!((continuation_value(prior, 0.5, 0.25) - 0.53125).abs() < 1e-12);
}
