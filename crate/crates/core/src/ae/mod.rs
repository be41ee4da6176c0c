//! Statistical simulation of Chebyshev-coin amplitude estimation.
//!
//! An amplitude `a = cos θ` is never observed directly. Each round picks an
//! odd degree `k` and flips a coin whose bias depends on `T_k(a) = cos kθ`;
//! the confidence interval on the bias is pulled back through the branch
//! of `cos kθ` that contains the current `θ` interval. [`chebae_estimate`]
//! recovers `|a|` from plain coins with bias `T_k(a)²`; [`signed_estimate`]
//! uses the Hadamard-shifted coin to recover `a` with its sign.

mod bounds;
mod chebae;
mod coin;
mod model;
mod signed;

pub use bounds::kl_interval;
pub use chebae::chebae_estimate;
pub use coin::{chebyshev_coin, chebyshev_t, CoinFlavour, CoinOracle, Sampling};
pub use model::{
    model_query_complexity, oracle_gate_cost, GateCost, ModelQueries, FIT_RANGE, QUERY_A, QUERY_B, SIGNED_QUERY_B,
};
pub use signed::{signed_estimate, ShiftConvention};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AeConfig {
    /// Target half-width of the final interval on `a`.
    pub eps: f64,
    pub delta: f64,
    /// First shift for the signed estimator.
    pub b0: f64,
    /// Largest degree the estimator may request.
    pub degree_cap: u64,
    /// Coin flips between interval updates.
    pub shots_per_round: u64,
    /// Fraction of a monotone branch kept free when choosing `k`.
    pub margin: f64,
    /// A new degree is adopted once it is this many times the current one.
    pub degree_growth: f64,
    /// Smallest `|b|` the shift rule may produce.
    pub min_shift: f64,
    #[serde(default)]
    pub convention: ShiftConvention,
}

impl Default for AeConfig {
    fn default() -> Self {
        Self {
            eps: 1e-2,
            delta: 0.05,
            b0: 1.0 - 1e-9,
            degree_cap: 100_000,
            shots_per_round: 1,
            margin: 0.1,
            degree_growth: 2.0,
            min_shift: 0.25,
            convention: ShiftConvention::default(),
        }
    }
}

impl AeConfig {
    pub fn new(eps: f64, delta: f64) -> Result<Self> {
        let cfg = Self { eps, delta, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return bad(format!("eps must lie in (0, 1), got {}", self.eps));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if !(self.b0.abs() > 0.0 && self.b0.abs() < 1.0) {
            return bad(format!("|b0| must lie in (0, 1), got {}", self.b0));
        }
        if self.degree_cap < 1 || self.shots_per_round < 1 {
            return bad("degree cap and shots per round must be >= 1".into());
        }
        if !(0.0..1.0).contains(&self.margin) {
            return bad(format!("margin must lie in [0, 1), got {}", self.margin));
        }
        if !(self.degree_growth > 1.0) {
            return bad("degree growth must exceed 1".into());
        }
        if !(self.min_shift > 0.0 && self.min_shift < 1.0) {
            return bad("min shift must lie in (0, 1)".into());
        }
        Ok(())
    }

    /// Upper bound on the number of degree stages before the interval on
    /// `θ` is narrow enough; the failure budget is split evenly over them.
    pub(crate) fn max_stages(&self, branch: f64) -> u32 {
        let needed = branch / (2.0 * self.eps);
        (needed.ln() / self.degree_growth.ln()).ceil().max(0.0) as u32 + 2
    }
}

/// Interval held on `a` at the end of one stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub degree: u64,
    pub shots: u64,
    pub shift: f64,
    pub a_lo: f64,
    pub a_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AeResult {
    pub a_hat: f64,
    pub a_lo: f64,
    pub a_hi: f64,
    pub coin_flips: u64,
    /// Projector applications: a degree-`k` coin with `k = 2m + 1` applies
    /// the projector rotation `m + 1` times.
    pub queries: u64,
    /// `Σ shots × k`.
    pub degree_weighted_queries: u64,
    pub rounds: usize,
    pub shifts: Vec<f64>,
    pub stages: Vec<StageRecord>,
    pub converged: bool,
    /// Set when the shift rule or coin probabilities had to be clamped.
    pub clamped: bool,
}

impl AeResult {
    fn push_stage(&mut self, degree: u64, shots: u64, shift: f64, a_lo: f64, a_hi: f64) {
        self.stages.push(StageRecord { degree, shots, shift, a_lo, a_hi });
    }

    fn count_shots(&mut self, degree: u64, shots: u64) {
        self.coin_flips += shots;
        self.queries += shots * degree.div_ceil(2);
        self.degree_weighted_queries += shots * degree;
    }
}

/// Largest odd `k ≤ cap` whose image `[kθ_lo, kθ_hi]` fits inside one
/// monotone branch of width `branch`, with `k (θ_hi − θ_lo) ≤ (1 − margin)
/// branch`.
pub(crate) fn largest_degree(theta_lo: f64, theta_hi: f64, branch: f64, margin: f64, cap: u64) -> u64 {
    let width = theta_hi - theta_lo;
    let mut k = if width > 0.0 { ((1.0 - margin) * branch / width).floor().min(cap as f64) as u64 } else { cap };
    if k % 2 == 0 {
        k = k.saturating_sub(1);
    }
    while k > 1 {
        let lo = (k as f64 * theta_lo / branch).floor();
        let hi = (k as f64 * theta_hi / branch * (1.0 - 1e-12)).floor();
        if lo == hi {
            return k;
        }
        k -= 2;
    }
    1
}
