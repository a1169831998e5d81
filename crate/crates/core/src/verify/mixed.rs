//! Numerical check of the three conditions defining a hidden-price equilibrium.

use serde::{Deserialize, Serialize};

use crate::hidden::MixedEquilibrium;
use crate::model::Prior;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedCheck {
    /// Largest relative gap between `p (1 - F(p + a)-)` and `p_lower` on the support.
    pub max_indifference_dev: f64,
    /// Largest gap between the consumer's payoff and the reported value line,
    /// or between that line and `2 kappa (mu - x_lower) x + kappa (x_lower^2 - mu^2) + a`.
    pub max_affine_dev: f64,
    /// `|E[x] - mu|` under the value distribution.
    pub mean_dev: f64,
}

impl MixedCheck {
    pub fn max(&self) -> f64 {
        self.max_indifference_dev.max(self.max_affine_dev).max(self.mean_dev)
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Evaluate the equilibrium conditions of `eq` on `grid_n` points of its
/// support, using the primitives in `prior` rather than those stored in `eq`.
pub fn check_mixed_equilibrium(eq: &MixedEquilibrium, prior: Prior, grid_n: usize) -> MixedCheck {
    let n = grid_n.max(2);
    let (mu, kappa) = (prior.mu, prior.kappa);
    let a = eq.effective_outside;
    let (p_lo, p_hi) = (eq.p_lower, eq.p_upper);
    let at = |lo: f64, hi: f64, i: usize| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };

    let max_indifference_dev = (0..n)
        .map(|i| {
            let p = at(p_lo, p_hi, i);
            let profit = p * (1.0 - eq.value_cdf_left(p + a));
            (profit - p_lo).abs() / p_lo
        })
        .fold(0.0, f64::max);

    let g = |p: f64| (2.0 * kappa * (p - p_lo)).clamp(0.0, 1.0);
    let payoff = |x: f64| {
        let q = (x - a).clamp(p_lo, p_hi);
        let paid = 2.0 * kappa * (x * (q - p_lo) - 0.5 * (q * q - p_lo * p_lo));
        a * (1.0 - g(x - a)) + paid - kappa * (x - mu).powi(2)
    };
    let (x_lo, x_hi) = (eq.x_lower, eq.x_upper);
    let slope = 2.0 * kappa * (mu - x_lo);
    let intercept = kappa * (x_lo * x_lo - mu * mu) + a;
    let max_affine_dev = (0..n)
        .map(|i| {
            let x = at(x_lo, x_hi, i);
            let line = eq.value_line.eval(x);
            (payoff(x) - line).abs().max((slope * x + intercept - line).abs())
        })
        .fold(0.0, f64::max);

    let lam = x_lo - a;
    let density = |x: f64| x * lam / ((x - a) * (x - a));
    let mean = integrate(density, x_lo, x_hi, 1e-13) + x_hi * eq.atom_mass();

    MixedCheck { max_indifference_dev, max_affine_dev, mean_dev: (mean - mu).abs() }
}
