//! Measurement-error and α-cutoff models for correction vectors, and
//! `(ε, α)` sweeps through the nozzle outer loop.

use std::io::Write;

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::nozzle::{run_outer_loop, CorrectionVector, NozzleCase};
use crate::rng::{substream, SimRng};
use crate::{Error, Result};

/// How `ε_meas` maps to the Gaussian scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseScale {
    /// σ = ε_meas.
    #[default]
    StdDev,
    /// σ² = ε_meas.
    Variance,
}

/// Which vector the shift is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseTarget {
    /// Shift the unit-norm state, then restore the original norm.
    #[default]
    Normalised,
    /// Shift the raw correction components.
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub eps_meas: f64,
    pub alpha: f64,
    pub seed: u64,
    pub iteration_cap: usize,
    #[serde(default)]
    pub scale: NoiseScale,
    #[serde(default)]
    pub target: NoiseTarget,
}

impl NoiseSpec {
    pub fn new(eps_meas: f64, alpha: f64, seed: u64) -> Result<Self> {
        let spec = Self {
            eps_meas,
            alpha,
            seed,
            iteration_cap: 100_000,
            scale: NoiseScale::default(),
            target: NoiseTarget::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_meas >= 0.0 && self.eps_meas.is_finite()) {
            return Err(Error::InvalidParameter(format!("eps_meas must be >= 0, got {}", self.eps_meas)));
        }
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter(format!("alpha must lie in [0, 1), got {}", self.alpha)));
        }
        Ok(())
    }

    pub fn sigma(&self) -> f64 {
        match self.scale {
            NoiseScale::StdDev => self.eps_meas,
            NoiseScale::Variance => self.eps_meas.sqrt(),
        }
    }
}

pub fn apply_gaussian_noise<R: Rng + ?Sized>(v: &CorrectionVector, spec: &NoiseSpec, rng: &mut R) -> CorrectionVector {
    let sigma = spec.sigma();
    if sigma == 0.0 {
        return v.clone();
    }
    let mut shift = |x: &DVector<f64>| x.map(|c| c + sigma * rng.sample::<f64, _>(StandardNormal));
    match spec.target {
        NoiseTarget::Normalised => CorrectionVector::from_normalised(shift(v.normalised()), v.norm()),
        NoiseTarget::Absolute => CorrectionVector::new(shift(v.values())),
    }
}

/// Zeroes every component with `|a_i| ≤ α·max|a|`.
pub fn apply_cutoff(v: &CorrectionVector, alpha: f64) -> CorrectionVector {
    let a_max = v.max_abs();
    if a_max == 0.0 {
        return v.clone();
    }
    let threshold = alpha * a_max;
    CorrectionVector::new(v.values().map(|a| if a.abs() > threshold { a } else { 0.0 }))
}

/// Noise followed by cutoff, drawing from `rng`.
pub fn corrector(spec: NoiseSpec, mut rng: SimRng) -> impl FnMut(CorrectionVector) -> CorrectionVector {
    move |dx| apply_cutoff(&apply_gaussian_noise(&dx, &spec, &mut rng), spec.alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub eps: f64,
    pub alpha: f64,
    pub trial: usize,
    pub max_error: f64,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    pub fn cell(&self, eps: f64, alpha: f64, trial: usize) -> Option<&SweepCell> {
        self.cells.iter().find(|c| c.eps == eps && c.alpha == alpha && c.trial == trial)
    }

    pub fn at(&self, eps: f64, alpha: f64) -> impl Iterator<Item = &SweepCell> {
        self.cells.iter().filter(move |c| c.eps == eps && c.alpha == alpha)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for c in &self.cells {
            w.serialize(c)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Sweep options shared by every cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub seed: u64,
    pub iteration_cap: usize,
    #[serde(default)]
    pub scale: NoiseScale,
    #[serde(default)]
    pub target: NoiseTarget,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { seed: 0, iteration_cap: 100_000, scale: NoiseScale::default(), target: NoiseTarget::default() }
    }
}

/// Runs the outer loop once per `(ε, α, trial)` with corrector
/// cutoff ∘ noise. `max_error` is the largest component of the final
/// applied correction. Cells run in parallel, each with its own stream.
pub fn run_noisy_sweep(
    case: &NozzleCase,
    eps_list: &[f64],
    alpha_list: &[f64],
    trials: usize,
    opts: SweepOptions,
) -> Result<SweepResult> {
    if eps_list.is_empty() || alpha_list.is_empty() || trials == 0 {
        return Err(Error::InvalidParameter("sweep needs nonempty lists and trials >= 1".into()));
    }
    let mut jobs = Vec::new();
    for (ie, &eps) in eps_list.iter().enumerate() {
        for (ia, &alpha) in alpha_list.iter().enumerate() {
            let spec = NoiseSpec {
                eps_meas: eps,
                alpha,
                seed: opts.seed,
                iteration_cap: opts.iteration_cap,
                scale: opts.scale,
                target: opts.target,
            };
            spec.validate()?;
            for trial in 0..trials {
                jobs.push((ie, ia, trial, spec));
            }
        }
    }
    let mut case = case.clone();
    case.max_outer_iterations = opts.iteration_cap;
    let cells = jobs
        .into_par_iter()
        .map(|(ie, ia, trial, spec)| {
            let rng = substream(spec.seed, "noise", &[ie as u64, ia as u64, trial as u64]);
            let rep = run_outer_loop(&case, corrector(spec, rng));
            SweepCell {
                eps: spec.eps_meas,
                alpha: spec.alpha,
                trial,
                max_error: rep.final_max_correction,
                converged: rep.converged,
                iterations: rep.iterations,
            }
        })
        .collect();
    Ok(SweepResult { cells })
}
