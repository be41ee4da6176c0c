use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::bounds::kl_interval;
use super::coin::{binomial, CoinFlavour, CoinOracle, Sampling};
use super::{largest_degree, AeConfig, AeResult};
use crate::{Error, Result};

/// How the shifted states are realised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftConvention {
    /// One circuit: Hadamard-controlled coin and shift; the ancilla
    /// outcome selects the `+b` or `−b` branch.
    #[default]
    Hadamard,
    /// Two circuits preparing `(c ± b)` directly, each receiving half of
    /// the shots.
    TwoCircuit,
}

/// Running tallies for one stage at fixed degree and shift.
#[derive(Default)]
struct Tally {
    n_plus: u64,
    hits_plus: u64,
    n_minus: u64,
    hits_minus: u64,
}

impl Tally {
    /// Interval on `c = T_k(a)` implied by the tallies.
    fn c_interval(&self, convention: ShiftConvention, b: f64, delta: f64) -> (f64, f64) {
        let (lp, hp) = kl_interval(self.hits_plus, self.n_plus, delta / 2.0);
        let (lm, hm) = kl_interval(self.hits_minus, self.n_minus, delta / 2.0);
        // Hadamard: P₊ − P₋ = c·b. Two circuits: p₊ − p₋ = 4·c·b.
        let scale = match convention {
            ShiftConvention::Hadamard => b,
            ShiftConvention::TwoCircuit => 4.0 * b,
        };
        let (x, y) = ((lp - hm) / scale, (hp - lm) / scale);
        (x.min(y).max(-1.0), x.max(y).min(1.0))
    }
}

/// Pulls an interval on `cos(kθ)` back to `θ`, given that `kθ` lies in
/// branch `j` of width π.
fn pull_back(c_lo: f64, c_hi: f64, k: u64, j: f64) -> (f64, f64) {
    let phase = |c: f64| if (j as u64).is_multiple_of(2) { c.acos() } else { (-c).acos() };
    let (x, y) = (phase(c_lo), phase(c_hi));
    let kf = k as f64;
    ((j * PI + x.min(y)) / kf, (j * PI + x.max(y)) / kf)
}

/// `b_{i+1} = −a_min`, kept at least `min_shift` away from zero.
fn next_shift(a_lo: f64, previous: f64, cfg: &AeConfig) -> (f64, bool) {
    let b = -a_lo;
    if b.abs() >= cfg.min_shift {
        (b.clamp(-1.0 + 1e-9, 1.0 - 1e-9), false)
    } else {
        let sign = if b != 0.0 { b.signum() } else { previous.signum() };
        (sign * cfg.min_shift, true)
    }
}

/// Estimates the signed amplitude from shifted coins.
///
/// Keeps an interval on `θ = arccos a ∈ [0, π]`. Each stage fixes an odd
/// degree `k` and a shift `b_i`; outcomes estimate `(c ± b_i)²` with
/// `c = T_k(a)`, and `(p̂₊ − p̂₋)/(4 b_i)` estimates `c`. When a new stage
/// starts the shift becomes minus the current lower bound on `a`.
pub fn signed_estimate<R: Rng + ?Sized>(
    oracle: &CoinOracle,
    cfg: &AeConfig,
    mut sampling: Sampling<'_, R>,
) -> Result<AeResult> {
    cfg.validate()?;
    if oracle.flavour() != CoinFlavour::Shifted {
        return Err(Error::InvalidParameter("signed_estimate needs a shifted coin".into()));
    }
    let mut res = AeResult {
        a_hat: 0.0,
        a_lo: -1.0,
        a_hi: 1.0,
        coin_flips: 0,
        queries: 0,
        degree_weighted_queries: 0,
        rounds: 0,
        shifts: vec![cfg.b0],
        stages: Vec::new(),
        converged: false,
        clamped: false,
    };

    let rng = match &mut sampling {
        Sampling::Exact => {
            let b = cfg.b0;
            let (p_plus, p_minus) = match cfg.convention {
                ShiftConvention::Hadamard => {
                    let (p0, p1) = oracle.shifted_probabilities(1, b);
                    (4.0 * p0, 4.0 * p1)
                }
                ShiftConvention::TwoCircuit => {
                    let (p, clamped) = oracle.two_circuit_probabilities(1, b);
                    res.clamped = clamped;
                    p
                }
            };
            let a = (p_plus - p_minus) / (4.0 * b);
            res.a_hat = a;
            res.a_lo = a;
            res.a_hi = a;
            res.rounds = 1;
            res.converged = true;
            res.push_stage(1, 0, b, a, a);
            return Ok(res);
        }
        Sampling::Shots(rng) => rng,
    };

    let stage_delta = cfg.delta / f64::from(cfg.max_stages(PI));
    let (mut theta_lo, mut theta_hi) = (0.0f64, PI);
    let mut k = 0u64;
    let mut b = cfg.b0;
    let mut tally = Tally::default();

    loop {
        let (a_lo, a_hi) = (theta_hi.cos(), theta_lo.cos());
        res.a_lo = a_lo;
        res.a_hi = a_hi;
        res.a_hat = 0.5 * (a_lo + a_hi);
        if 0.5 * (a_hi - a_lo) <= cfg.eps {
            res.converged = true;
            break;
        }
        let next = largest_degree(theta_lo, theta_hi, PI, cfg.margin, u64::MAX);
        if k == 0 || next as f64 >= cfg.degree_growth * k as f64 {
            if k > 0 {
                res.push_stage(k, tally.n_plus + tally.n_minus, b, a_lo, a_hi);
                let (nb, clamped) = next_shift(a_lo, b, cfg);
                b = nb;
                res.clamped |= clamped;
                res.shifts.push(b);
            }
            if next > cfg.degree_cap {
                break;
            }
            k = next;
            tally = Tally::default();
            res.rounds += 1;
        }

        let shots = cfg.shots_per_round;
        let used = match cfg.convention {
            ShiftConvention::Hadamard => {
                let (p0, p1) = oracle.shifted_probabilities(k, b);
                let plus = binomial(shots, p0, *rng);
                let rest = shots - plus;
                let minus = if p0 < 1.0 { binomial(rest, p1 / (1.0 - p0), *rng) } else { 0 };
                tally.n_plus += shots;
                tally.n_minus += shots;
                tally.hits_plus += plus;
                tally.hits_minus += minus;
                shots
            }
            ShiftConvention::TwoCircuit => {
                let ((pp, pm), clamped) = oracle.two_circuit_probabilities(k, b);
                res.clamped |= clamped;
                let half = shots.div_ceil(2);
                tally.n_plus += half;
                tally.hits_plus += binomial(half, pp, *rng);
                tally.n_minus += half;
                tally.hits_minus += binomial(half, pm, *rng);
                2 * half
            }
        };
        res.count_shots(k, used);

        let (c_lo, c_hi) = tally.c_interval(cfg.convention, b, stage_delta);
        let j = (k as f64 * theta_lo / PI).floor();
        let (lo, hi) = pull_back(c_lo, c_hi, k, j);
        let new_lo = theta_lo.max(lo);
        let new_hi = theta_hi.min(hi);
        if new_lo <= new_hi {
            theta_lo = new_lo;
            theta_hi = new_hi;
        } else {
            theta_lo = lo.max(0.0);
            theta_hi = hi.min(PI);
        }
    }
    res.push_stage(k, tally.n_plus.max(tally.n_minus), b, res.a_lo, res.a_hi);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, SimRng};

    fn exact(a: f64, b: f64, convention: ShiftConvention) -> AeResult {
        let mut cfg = AeConfig::new(1e-3, 0.05).unwrap();
        cfg.b0 = b;
        cfg.convention = convention;
        signed_estimate(&CoinOracle::shifted(a).unwrap(), &cfg, Sampling::<SimRng>::Exact).unwrap()
    }

    #[test]
    fn exact_probabilities_recover_amplitude() {
        for conv in [ShiftConvention::Hadamard, ShiftConvention::TwoCircuit] {
            assert!((exact(0.3, 0.5, conv).a_hat - 0.3).abs() < 1e-12);
            assert!((exact(-0.3, 0.5, conv).a_hat + 0.3).abs() < 1e-12);
        }
        for a in [-0.99, -0.5, 0.0, 0.123, 0.9] {
            assert!((exact(a, 0.7, ShiftConvention::Hadamard).a_hat - a).abs() < 1e-12);
        }
    }

    #[test]
    fn eq15_by_hand() {
        let (p_plus, p_minus) = (0.8f64.powi(2), (-0.2f64).powi(2));
        assert!(((p_plus - p_minus) / (4.0 * 0.5) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn shift_rule() {
        let cfg = AeConfig::default();
        assert_eq!(next_shift(0.4, 0.9, &cfg), (-0.4, false));
        assert_eq!(next_shift(-0.6, 0.9, &cfg), (0.6, false));
        assert_eq!(next_shift(0.1, 0.9, &cfg), (-0.25, true));
        assert_eq!(next_shift(0.0, -0.9, &cfg), (-0.25, true));
    }

    #[test]
    fn sign_of_negative_amplitude() {
        let cfg = AeConfig::new(0.01, 0.05).unwrap();
        let oracle = CoinOracle::shifted(-0.4).unwrap();
        let correct = (0..300)
            .filter(|&t| {
                let mut rng = substream(21, "signed-test", &[t]);
                signed_estimate(&oracle, &cfg, Sampling::Shots(&mut rng)).unwrap().a_hat < 0.0
            })
            .count();
        assert!(correct >= 297);
    }

    #[test]
    fn shift_history_follows_lower_bounds() {
        let cfg = AeConfig::new(0.01, 0.05).unwrap();
        let mut rng = substream(22, "signed-test", &[]);
        let r = signed_estimate(&CoinOracle::shifted(0.6).unwrap(), &cfg, Sampling::Shots(&mut rng)).unwrap();
        assert!(r.converged);
        assert_eq!(r.shifts[0], cfg.b0);
        for (i, stage) in r.stages.iter().enumerate().take(r.shifts.len().saturating_sub(1)) {
            let (want, _) = next_shift(stage.a_lo, stage.shift, &cfg);
            assert_eq!(r.shifts[i + 1], want);
        }
    }

    #[test]
    fn two_circuit_sampling_runs() {
        let mut cfg = AeConfig::new(0.02, 0.05).unwrap();
        cfg.convention = ShiftConvention::TwoCircuit;
        cfg.b0 = 0.3;
        let mut rng = substream(23, "signed-test", &[]);
        let r = signed_estimate(&CoinOracle::shifted(0.2).unwrap(), &cfg, Sampling::Shots(&mut rng)).unwrap();
        assert!(r.a_hat.abs() <= 1.0);
        assert_eq!(r.coin_flips % 2, 0);
    }
}
