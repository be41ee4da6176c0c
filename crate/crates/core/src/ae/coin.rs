use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::{Error, Result};

/// `T_k(a) = cos(k arccos a)`.
pub fn chebyshev_t(k: u64, a: f64) -> f64 {
    (k as f64 * a.clamp(-1.0, 1.0).acos()).cos()
}

pub(crate) fn binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    Binomial::new(n, p.clamp(0.0, 1.0)).expect("probability clamped to [0, 1]").sample(rng)
}

/// Number of successes in `shots` flips of the degree-`k` coin, whose
/// success probability is `T_k(a)²`.
pub fn chebyshev_coin<R: Rng + ?Sized>(a: f64, k: u64, shots: u64, rng: &mut R) -> u64 {
    let t = chebyshev_t(k, a);
    binomial(shots, t * t, rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinFlavour {
    /// Success probability `T_k(a)²`.
    Plain,
    /// Hadamard test with a shift `b = cos θ_b` on the controlled branch.
    Shifted,
}

/// Where coin outcomes come from.
pub enum Sampling<'a, R: Rng + ?Sized> {
    Shots(&'a mut R),
    /// Infinite-shot limit: estimators see the exact probabilities.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinOracle {
    a: f64,
    flavour: CoinFlavour,
}

impl CoinOracle {
    pub fn new(a: f64, flavour: CoinFlavour) -> Result<Self> {
        if !(a.abs() <= 1.0) {
            return Err(Error::InvalidParameter(format!("amplitude must lie in [-1, 1], got {a}")));
        }
        Ok(Self { a, flavour })
    }

    pub fn plain(a: f64) -> Result<Self> {
        Self::new(a, CoinFlavour::Plain)
    }

    pub fn shifted(a: f64) -> Result<Self> {
        Self::new(a, CoinFlavour::Shifted)
    }

    pub fn amplitude(&self) -> f64 {
        self.a
    }

    pub fn flavour(&self) -> CoinFlavour {
        self.flavour
    }

    pub fn plain_probability(&self, k: u64) -> f64 {
        let t = chebyshev_t(k, self.a);
        t * t
    }

    /// Probabilities of (ancilla 0, hit) and (ancilla 1, hit):
    /// `((c + b)/2)²` and `((b − c)/2)²` with `c = T_k(a)`.
    pub fn shifted_probabilities(&self, k: u64, b: f64) -> (f64, f64) {
        let c = chebyshev_t(k, self.a);
        (((c + b) / 2.0).powi(2), ((b - c) / 2.0).powi(2))
    }

    /// Hit probabilities `(c ± b)²` of the two separately prepared shifted
    /// states, clamped to 1; the flag reports whether clamping happened.
    pub fn two_circuit_probabilities(&self, k: u64, b: f64) -> ((f64, f64), bool) {
        let c = chebyshev_t(k, self.a);
        let plus = (c + b).powi(2);
        let minus = (c - b).powi(2);
        ((plus.min(1.0), minus.min(1.0)), plus > 1.0 || minus > 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use proptest::prelude::*;

    /// Three-term recurrence `T_{n+1} = 2a T_n − T_{n−1}`.
    fn recurrence(k: u64, a: f64) -> f64 {
        let (mut t0, mut t1) = (1.0, a);
        if k == 0 {
            return t0;
        }
        for _ in 1..k {
            let t2 = 2.0 * a * t1 - t0;
            t0 = t1;
            t1 = t2;
        }
        t1
    }

    #[test]
    fn low_degree_values() {
        assert!((chebyshev_t(1, 0.5) - 0.5).abs() < 1e-15);
        let p = CoinOracle::plain(0.5).unwrap().plain_probability(2);
        assert!((p - 0.25).abs() < 1e-15);
        let t5 = recurrence(5, 0.8);
        assert!((CoinOracle::plain(0.8).unwrap().plain_probability(5) - t5 * t5).abs() < 1e-12);
    }

    #[test]
    fn degree_one_rate() {
        let mut rng = substream(11, "coin", &[]);
        let n = 400_000;
        let rate = chebyshev_coin(0.5, 1, n, &mut rng) as f64 / n as f64;
        assert!((rate - 0.25).abs() < 4.0 * (0.25f64 * 0.75 / n as f64).sqrt());
    }

    #[test]
    fn shifted_probabilities_match_hadamard_state() {
        let o = CoinOracle::shifted(0.3).unwrap();
        let (p0, p1) = o.shifted_probabilities(1, 0.5);
        assert!((p0 - 0.16).abs() < 1e-15);
        assert!((p1 - 0.01).abs() < 1e-15);
        assert!(((p0 - p1) / 0.5 - 0.3).abs() < 1e-15);
    }

    #[test]
    fn two_circuit_clamps() {
        let o = CoinOracle::shifted(0.8).unwrap();
        let ((p, _), clamped) = o.two_circuit_probabilities(1, 0.5);
        assert_eq!(p, 1.0);
        assert!(clamped);
    }

    #[test]
    fn rejects_out_of_range_amplitude() {
        assert!(CoinOracle::plain(1.5).is_err());
    }

    proptest! {
        #[test]
        fn probabilities_are_bounded(a in -1.0f64..=1.0, k in 1u64..2000, b in -1.0f64..=1.0) {
            let o = CoinOracle::shifted(a).unwrap();
            let p = o.plain_probability(k);
            prop_assert!((0.0..=1.0).contains(&p));
            let (p0, p1) = o.shifted_probabilities(k, b);
            prop_assert!(p0 >= 0.0 && p1 >= 0.0 && p0 + p1 <= 1.0 + 1e-15);
        }

        #[test]
        fn cosine_form_matches_recurrence(a in -1.0f64..=1.0, k in 0u64..40) {
            prop_assert!((chebyshev_t(k, a) - recurrence(k, a)).abs() < 1e-9);
        }
    }
}
