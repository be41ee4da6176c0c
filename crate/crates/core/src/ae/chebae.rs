use std::f64::consts::FRAC_PI_2;

use rand::Rng;

use super::bounds::kl_interval;
use super::coin::{binomial, CoinFlavour, CoinOracle, Sampling};
use super::{largest_degree, AeConfig, AeResult};
use crate::{Error, Result};

/// Pulls an interval on `cos²(kθ)` back to `θ`, given that `kθ` lies in
/// branch `j` of width π/2.
fn pull_back(p_lo: f64, p_hi: f64, k: u64, j: f64) -> (f64, f64) {
    let phase = |p: f64| {
        let r = p.clamp(0.0, 1.0).sqrt();
        if (j as u64).is_multiple_of(2) {
            r.acos()
        } else {
            r.asin()
        }
    };
    let (x, y) = (phase(p_lo), phase(p_hi));
    let kf = k as f64;
    ((j * FRAC_PI_2 + x.min(y)) / kf, (j * FRAC_PI_2 + x.max(y)) / kf)
}

/// Estimates `|a|` from plain Chebyshev coins.
///
/// The interval `[θ_lo, θ_hi] ⊂ [0, π/2]` on `θ = arccos |a|` is refined
/// until the matching interval on `|a|` has half-width at most `eps`; the
/// estimate is its midpoint.
pub fn chebae_estimate<R: Rng + ?Sized>(
    oracle: &CoinOracle,
    cfg: &AeConfig,
    mut sampling: Sampling<'_, R>,
) -> Result<AeResult> {
    cfg.validate()?;
    if oracle.flavour() != CoinFlavour::Plain {
        return Err(Error::InvalidParameter("chebae_estimate needs a plain coin".into()));
    }
    let mut res = AeResult {
        a_hat: 0.0,
        a_lo: 0.0,
        a_hi: 1.0,
        coin_flips: 0,
        queries: 0,
        degree_weighted_queries: 0,
        rounds: 0,
        shifts: Vec::new(),
        stages: Vec::new(),
        converged: false,
        clamped: false,
    };

    let rng = match &mut sampling {
        Sampling::Exact => {
            let a = oracle.plain_probability(1).sqrt();
            res.a_hat = a;
            res.a_lo = a;
            res.a_hi = a;
            res.rounds = 1;
            res.converged = true;
            res.push_stage(1, 0, 0.0, a, a);
            return Ok(res);
        }
        Sampling::Shots(rng) => rng,
    };

    let stage_delta = cfg.delta / f64::from(cfg.max_stages(FRAC_PI_2));
    let (mut theta_lo, mut theta_hi) = (0.0f64, FRAC_PI_2);
    let mut k = 0u64;
    let (mut n, mut hits) = (0u64, 0u64);

    loop {
        let (a_lo, a_hi) = (theta_hi.cos().max(0.0), theta_lo.cos());
        res.a_lo = a_lo;
        res.a_hi = a_hi;
        res.a_hat = 0.5 * (a_lo + a_hi);
        if 0.5 * (a_hi - a_lo) <= cfg.eps {
            res.converged = true;
            break;
        }
        let next = largest_degree(theta_lo, theta_hi, FRAC_PI_2, cfg.margin, u64::MAX);
        if k == 0 || next as f64 >= cfg.degree_growth * k as f64 {
            if k > 0 {
                res.push_stage(k, n, 0.0, a_lo, a_hi);
            }
            if next > cfg.degree_cap {
                break;
            }
            k = next;
            n = 0;
            hits = 0;
            res.rounds += 1;
        }
        let shots = cfg.shots_per_round;
        hits += binomial(shots, oracle.plain_probability(k), *rng);
        n += shots;
        res.count_shots(k, shots);

        let (p_lo, p_hi) = kl_interval(hits, n, stage_delta);
        let j = (k as f64 * theta_lo / FRAC_PI_2).floor();
        let (lo, hi) = pull_back(p_lo, p_hi, k, j);
        let new_lo = theta_lo.max(lo);
        let new_hi = theta_hi.min(hi);
        if new_lo <= new_hi {
            theta_lo = new_lo;
            theta_hi = new_hi;
        } else {
            // Confidence sets disagree: a failure event. Keep the newest.
            theta_lo = lo.max(0.0);
            theta_hi = hi.min(FRAC_PI_2);
        }
    }
    res.push_stage(k, n, 0.0, res.a_lo, res.a_hi);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ae::model_query_complexity;
    use crate::rng::{substream, SimRng};

    fn run(a: f64, eps: f64, seed: u64, trial: u64) -> AeResult {
        let cfg = AeConfig::new(eps, 0.05).unwrap();
        let mut rng = substream(seed, "chebae-test", &[trial]);
        chebae_estimate(&CoinOracle::plain(a).unwrap(), &cfg, Sampling::Shots(&mut rng)).unwrap()
    }

    #[test]
    fn zero_amplitude_boundary() {
        let ok = (0..200).filter(|&t| {
            let r = run(0.0, 0.01, 1, t);
            (0.0..=0.01).contains(&r.a_hat)
        });
        assert!(ok.count() >= 190);
    }

    #[test]
    fn exact_coins_return_magnitude() {
        let cfg = AeConfig::new(1e-3, 0.05).unwrap();
        let r = chebae_estimate(&CoinOracle::plain(-0.42).unwrap(), &cfg, Sampling::<SimRng>::Exact).unwrap();
        assert!((r.a_hat - 0.42).abs() < 1e-12);
    }

    #[test]
    fn final_interval_and_accounting() {
        let r = run(0.7, 0.005, 2, 0);
        assert!(r.converged);
        assert!(r.a_hi - r.a_lo <= 0.01 + 1e-15);
        assert!(r.queries >= r.coin_flips);
        let weighted: u64 = r.stages.iter().map(|s| s.shots * s.degree).sum();
        assert_eq!(weighted, r.degree_weighted_queries);
        let projector: u64 = r.stages.iter().map(|s| s.shots * s.degree.div_ceil(2)).sum();
        assert_eq!(projector, r.queries);
        assert!(r.stages.iter().all(|s| s.degree % 2 == 1));
    }

    #[test]
    fn intervals_contain_truth_in_most_runs() {
        let a = 0.5f64;
        let mut bad = 0;
        for t in 0..200 {
            let r = run(a, 0.01, 3, t);
            if r.stages.iter().any(|s| a < s.a_lo - 1e-12 || a > s.a_hi + 1e-12) {
                bad += 1;
            }
        }
        assert!(bad <= 10 + 3 * 3, "{bad}");
    }

    #[test]
    fn degree_cap_flags_unconverged() {
        let mut cfg = AeConfig::new(1e-4, 0.05).unwrap();
        cfg.degree_cap = 9;
        let mut rng = substream(4, "cap", &[]);
        let r = chebae_estimate(&CoinOracle::plain(0.5).unwrap(), &cfg, Sampling::Shots(&mut rng)).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn mean_queries_near_model() {
        let trials = 100;
        let mean = (0..trials).map(|t| run(0.5, 1e-2, 5, t).queries as f64).sum::<f64>() / trials as f64;
        let model = model_query_complexity(1e-2, false).unwrap().queries;
        assert!(mean / model < 3.0 && mean / model > 1.0 / 3.0, "{mean} vs {model}");
    }
}
