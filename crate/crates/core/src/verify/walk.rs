//! Two-barrier random walk on a lattice of step `z = sigma sqrt(dt)`.
//!
//! Each path draws its steps from its own ChaCha8 stream (stream index = path
//! index, key from the seed), one bit per step, so results do not depend on
//! how paths are scheduled across threads. Sums are accumulated as integers.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomWalkConfig {
    pub sigma: f64,
    /// Flow cost per unit of time.
    pub gamma: f64,
    pub dt: f64,
    pub n_paths: u64,
    pub seed: u64,
}

impl RandomWalkConfig {
    /// Unit diffusion with `gamma = kappa`.
    pub fn for_kappa(kappa: f64, dt: f64, n_paths: u64, seed: u64) -> Self {
        Self { sigma: 1.0, gamma: kappa, dt, n_paths, seed }
    }

    pub fn kappa(&self) -> f64 {
        self.gamma / (self.sigma * self.sigma)
    }

    pub fn step(&self) -> f64 {
        self.sigma * self.dt.sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("sigma", self.sigma), ("gamma", self.gamma), ("dt", self.dt)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.n_paths == 0 {
            return Err(Error::InvalidConfig("n_paths must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkReport {
    pub hit_high_fraction: f64,
    /// `gamma * dt` times the mean number of steps.
    pub mean_cost: f64,
    pub stderr_hit: f64,
    pub stderr_cost: f64,
    /// Lattice steps from the start to each barrier.
    pub steps_low: u64,
    pub steps_high: u64,
}

fn lattice_steps(distance: f64, z: f64) -> u64 {
    (distance / z - 1e-9).ceil().max(1.0) as u64
}

fn run_path(seed: u64, path: u64, steps_low: i64, steps_high: i64) -> (bool, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    let mut pos = 0i64;
    let mut n = 0u64;
    loop {
        let mut bits = rng.next_u64();
        for _ in 0..64 {
            pos += if bits & 1 == 1 { 1 } else { -1 };
            bits >>= 1;
            n += 1;
            if pos >= steps_high {
                return (true, n);
            }
            if pos <= -steps_low {
                return (false, n);
            }
        }
    }
}

fn stderr(n: u128, sum: u128, sum_sq: u128) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let centred = n * sum_sq - sum * sum;
    ((centred as f64) / (n as f64 * n as f64 * (n - 1) as f64)).sqrt()
}

/// Simulate `n_paths` walks from `start` until they leave `(u_low, u_high)`;
/// a crossing step is recorded at the barrier it crosses.
pub fn simulate_two_barrier(config: &RandomWalkConfig, start: f64, u_low: f64, u_high: f64) -> Result<WalkReport> {
    config.validate()?;
    if !(u_low < start && start < u_high) {
        return Err(Error::InvalidBarriers { start, u_low, u_high });
    }
    let z = config.step();
    if z > (u_high - u_low) / 10.0 {
        return Err(Error::InvalidConfig(format!(
            "step {z} is coarser than a tenth of the barrier gap {}",
            u_high - u_low
        )));
    }
    let steps_low = lattice_steps(start - u_low, z);
    let steps_high = lattice_steps(u_high - start, z);
    let (hits, sum, sum_sq) = (0..config.n_paths)
        .into_par_iter()
        .map(|i| {
            let (high, n) = run_path(config.seed, i, steps_low as i64, steps_high as i64);
            (high as u64, n as u128, (n as u128) * (n as u128))
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));

    let n = config.n_paths as u128;
    let hit = hits as f64 / config.n_paths as f64;
    let unit = config.gamma * config.dt;
    Ok(WalkReport {
        hit_high_fraction: hit,
        mean_cost: unit * (sum as f64 / config.n_paths as f64),
        stderr_hit: stderr(n, hits as u128, hits as u128),
        stderr_cost: unit * stderr(n, sum, sum_sq),
        steps_low,
        steps_high,
    })
}
