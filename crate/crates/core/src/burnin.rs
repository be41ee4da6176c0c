//! Burn-in estimation of the largest amplitude.
//!
//! Raw samples of a peaked state repeat quickly; the ratio of unique
//! outcomes to samples, `r = N_new / N_S`, falls faster the more weight the
//! peaks carry. Fitting `r` against `log10 N_S` gives a slope, and a
//! quadratic model of slope versus `a_max` inverts it.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::substream;
use crate::{Error, Result};

pub const SHOT_GRID: [u64; 9] = [10, 50, 100, 500, 1_000, 5_000, 10_000, 50_000, 100_000];
pub const QUBIT_GRID: [u32; 4] = [3, 4, 5, 6];
pub const A_MAX_GRID: [f64; 5] = [0.25, 0.5, 0.75, 0.9, 0.99];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DummyState {
    pub qubits: u32,
    pub n_peaks: usize,
    pub a_max: f64,
    pub peaks: Vec<usize>,
    pub amplitudes: Vec<f64>,
}

impl DummyState {
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a * a).collect()
    }
}

/// Uniform state on `D` qubits with `n_peaks` distinct random positions
/// set to `a_max`, renormalised.
pub fn make_dummy_state<R: Rng + ?Sized>(qubits: u32, n_peaks: usize, a_max: f64, rng: &mut R) -> Result<DummyState> {
    if qubits == 0 || qubits > 30 {
        return Err(Error::InvalidParameter(format!("qubit count {qubits} out of range")));
    }
    let dim = 1usize << qubits;
    if n_peaks > dim {
        return Err(Error::InvalidParameter(format!("{n_peaks} peaks exceed {dim} basis states")));
    }
    if !(a_max > 0.0 && a_max < 1.0) {
        return Err(Error::InvalidParameter(format!("a_max must lie in (0, 1), got {a_max}")));
    }
    let mut amplitudes = vec![1.0 / (dim as f64).sqrt(); dim];
    let mut peaks = sample(rng, dim, n_peaks).into_vec();
    peaks.sort_unstable();
    for &i in &peaks {
        amplitudes[i] = a_max;
    }
    let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    amplitudes.iter_mut().for_each(|a| *a /= norm);
    Ok(DummyState { qubits, n_peaks, a_max, peaks, amplitudes })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub n_s: u64,
    pub n_new: u64,
    pub r: f64,
}

/// Draws `n_s` basis states and counts the distinct outcomes.
///
/// Outcome counts are drawn as one multinomial via conditional binomials,
/// which is exact and independent of `n_s` in cost.
pub fn sample_unique_ratio<R: Rng + ?Sized>(state: &DummyState, n_s: u64, rng: &mut R) -> Result<RatioSample> {
    if n_s == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let probs = state.probabilities();
    let mut remaining_n = n_s;
    let mut remaining_p = 1.0f64;
    let mut n_new = 0u64;
    for (i, &p) in probs.iter().enumerate() {
        if remaining_n == 0 {
            break;
        }
        let count = if i + 1 == probs.len() || p >= remaining_p {
            remaining_n
        } else {
            let q = (p / remaining_p).clamp(0.0, 1.0);
            Binomial::new(remaining_n, q).expect("probability in [0, 1]").sample(rng)
        };
        if count > 0 {
            n_new += 1;
        }
        remaining_n -= count;
        remaining_p -= p;
    }
    Ok(RatioSample { n_s, n_new, r: n_new as f64 / n_s as f64 })
}

/// Least-squares slope of `r` against `log10 N_S`.
pub fn fit_slope(samples: &[RatioSample]) -> Result<f64> {
    let distinct: BTreeSet<u64> = samples.iter().map(|s| s.n_s).collect();
    if distinct.len() < 2 {
        return Err(Error::Fit("need at least two distinct sample counts".into()));
    }
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|s| (s.n_s as f64).log10()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = samples.iter().map(|s| s.r).sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(samples).map(|(x, s)| (x - mx) * (s.r - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// `slope(a) = c₂ a² + c₁ a + c₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeModel {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl SlopeModel {
    /// The published fit.
    pub const PUBLISHED: SlopeModel = SlopeModel { c2: 0.17, c1: -0.36, c0: -0.14 };

    pub fn eval(&self, a: f64) -> f64 {
        (self.c2 * a + self.c1) * a + self.c0
    }

    pub fn derivative(&self, a: f64) -> f64 {
        2.0 * self.c2 * a + self.c1
    }

    /// Derivative strictly negative on `[0, 1]` (checked at the ends, as it
    /// is linear).
    pub fn is_decreasing(&self) -> bool {
        self.derivative(0.0) < 0.0 && self.derivative(1.0) < 0.0
    }

    pub fn is_increasing(&self) -> bool {
        self.derivative(0.0) > 0.0 && self.derivative(1.0) > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmaxEstimate {
    pub a_max: f64,
    /// The slope fell outside the model's range on `[0, 1]`.
    pub clamped: bool,
}

/// Inverts a model that is monotone on `[0, 1]`.
pub fn a_max_from_slope(slope: f64, model: &SlopeModel) -> Result<AmaxEstimate> {
    if !(model.is_decreasing() || model.is_increasing()) {
        return Err(Error::Fit("slope model is not monotone on [0, 1]".into()));
    }
    let (at0, at1) = (model.eval(0.0), model.eval(1.0));
    let (lo, hi) = (at0.min(at1), at0.max(at1));
    if slope <= lo || slope >= hi {
        let near_zero = (slope - at0).abs() <= (slope - at1).abs();
        let a_max = if near_zero { 0.0 } else { 1.0 };
        let exact = slope == at0 || slope == at1;
        return Ok(AmaxEstimate { a_max, clamped: !exact });
    }
    let (a, b, c) = (model.c2, model.c1, model.c0 - slope);
    let root = if a == 0.0 {
        -c / b
    } else {
        // Stable form; pick whichever root lies in [0, 1].
        let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
        let q = -0.5 * (b + b.signum() * disc);
        let r1 = q / a;
        let r2 = c / q;
        if (0.0..=1.0).contains(&r1) {
            r1
        } else {
            r2
        }
    };
    Ok(AmaxEstimate { a_max: root.clamp(0.0, 1.0), clamped: false })
}

/// Raw samples needed so that the smallest kept peak, `α a_max`, is seen.
pub fn burn_in_shots(alpha: f64, a_max: f64) -> Result<u64> {
    let x = alpha * a_max;
    if !(alpha > 0.0 && a_max > 0.0 && x.is_finite()) {
        return Err(Error::InvalidParameter("burn-in budget is unbounded for α·a_max = 0".into()));
    }
    let raw = 1.0 / (x * x);
    let nearest = raw.round();
    Ok(if (raw - nearest).abs() <= 1e-9 * nearest { nearest as u64 } else { raw.ceil() as u64 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BurnInGrid {
    pub qubits: Vec<u32>,
    pub a_max: Vec<f64>,
    pub shots: Vec<u64>,
}

impl Default for BurnInGrid {
    fn default() -> Self {
        Self { qubits: QUBIT_GRID.to_vec(), a_max: A_MAX_GRID.to_vec(), shots: SHOT_GRID.to_vec() }
    }
}

impl BurnInGrid {
    /// `(D, N_peaks)` pairs with `N_peaks = 2^i`, `i < D`.
    pub fn cases(&self) -> Vec<(u32, usize)> {
        self.qubits.iter().flat_map(|&d| (0..d).map(move |i| (d, 1usize << i))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeCell {
    pub qubits: u32,
    pub n_peaks: usize,
    pub a_max: f64,
    /// Mean over trials of the per-trial fitted slope.
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub model: SlopeModel,
    pub cells: Vec<SlopeCell>,
    /// `(a_max, mean slope over all (D, N_peaks))`.
    pub aggregate: Vec<(f64, f64)>,
}

/// Least-squares quadratic through `(x, y)` points.
pub fn fit_quadratic(points: &[(f64, f64)]) -> Result<SlopeModel> {
    let distinct: BTreeSet<u64> = points.iter().map(|p| p.0.to_bits()).collect();
    if distinct.len() < 3 {
        return Err(Error::Fit("quadratic fit needs at least three distinct abscissae".into()));
    }
    let n = points.len();
    let x = DMatrix::from_fn(n, 3, |i, j| points[i].0.powi(2 - j as i32));
    let y = DVector::from_iterator(n, points.iter().map(|p| p.1));
    let c = x.svd(true, true).solve(&y, 1e-14).map_err(|e| Error::Fit(e.to_string()))?;
    Ok(SlopeModel { c2: c[0], c1: c[1], c0: c[2] })
}

/// Runs the whole pipeline: dummy states for every `(D, N_peaks, a_max)`,
/// ratio samples on the shot grid, per-trial slopes, averages, and the
/// quadratic fit of mean slope against `a_max`.
pub fn rebuild_slope_model(grid: &BurnInGrid, trials: usize, seed: u64) -> Result<SlopeFit> {
    if grid.qubits.is_empty() || grid.a_max.is_empty() || grid.shots.is_empty() || trials == 0 {
        return Err(Error::InvalidParameter("burn-in grid must be nonempty".into()));
    }
    let mut jobs = Vec::new();
    for (ci, &(d, peaks)) in grid.cases().iter().enumerate() {
        for (ai, &a) in grid.a_max.iter().enumerate() {
            jobs.push((ci, ai, d, peaks, a));
        }
    }
    let cells: Vec<SlopeCell> = jobs
        .into_par_iter()
        .map(|(ci, ai, d, peaks, a)| {
            let mut total = 0.0;
            for t in 0..trials {
                let mut rng = substream(seed, "burnin", &[ci as u64, ai as u64, t as u64]);
                let state = make_dummy_state(d, peaks, a, &mut rng)?;
                let samples =
                    grid.shots.iter().map(|&n| sample_unique_ratio(&state, n, &mut rng)).collect::<Result<Vec<_>>>()?;
                total += fit_slope(&samples)?;
            }
            Ok(SlopeCell { qubits: d, n_peaks: peaks, a_max: a, slope: total / trials as f64 })
        })
        .collect::<Result<_>>()?;
    let aggregate: Vec<(f64, f64)> = grid
        .a_max
        .iter()
        .map(|&a| {
            let sel: Vec<f64> = cells.iter().filter(|c| c.a_max == a).map(|c| c.slope).collect();
            (a, sel.iter().sum::<f64>() / sel.len() as f64)
        })
        .collect();
    let model = fit_quadratic(&aggregate)?;
    Ok(SlopeFit { model, cells, aggregate })
}
