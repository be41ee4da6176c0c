use std::io::Write;

use serde::Serialize;

use super::{assemble_system, solve_linear, CorrectionVector, FlowState, NozzleCase, Regime};
use crate::Result;

/// One outer iteration: residual before the solve and the largest
/// component of the correction actually applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub residual_l2: f64,
    pub max_correction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub history: Vec<IterationRecord>,
    /// `‖δb‖` re-assembled at the final state.
    pub final_residual: f64,
    /// Largest applied correction over the velocity, pressure and density
    /// blocks in the last iteration.
    pub final_max_correction: f64,
    pub iterations: usize,
    pub converged: bool,
    pub final_state: FlowState,
    /// Set when an iteration could not be assembled or solved.
    pub failure: Option<String>,
}

impl ConvergenceReport {
    pub fn residual_history(&self) -> Vec<f64> {
        self.history.iter().map(|r| r.residual_l2).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for rec in &self.history {
            w.serialize(rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Applies `δx` to the state, refreshes density and returns the largest
/// change over all three fields.
fn apply_correction(case: &NozzleCase, state: &mut FlowState, dx: &CorrectionVector) -> f64 {
    let s = case.stations;
    let v = dx.values();
    let mut max = 0.0f64;
    for k in 0..s {
        state.velocity[k] += v[k];
        state.pressure[k] += v[s + k];
        max = max.max(v[k].abs()).max(v[s + k].abs());
    }
    if case.regime == Regime::Compressible {
        for i in 0..s {
            let rho = case.density_from_pressure(state.pressure[i]);
            max = max.max((rho - state.density[i]).abs());
            state.density[i] = rho;
        }
    }
    state.iteration += 1;
    max
}

/// Repeats assemble → solve → correct until the applied correction and
/// the re-assembled residual are both within `eps_tol`, or the cap is hit.
///
/// `corrector` sees every exact correction before it is applied; the
/// identity gives the noiseless baseline.
pub fn run_outer_loop<F>(case: &NozzleCase, mut corrector: F) -> ConvergenceReport
where
    F: FnMut(CorrectionVector) -> CorrectionVector,
{
    let tol = case.eps_tol;
    let mut state = case.initial_state();
    let mut history = Vec::new();
    let mut last_max = f64::INFINITY;
    let mut failure = None;
    let mut final_residual = f64::NAN;
    let mut converged = false;

    for iter in 0..=case.max_outer_iterations {
        let system = match assemble_system(case, &state) {
            Ok(s) => s,
            Err(e) => {
                failure = Some(e.to_string());
                break;
            }
        };
        final_residual = system.residual_l2;
        if last_max <= tol && system.residual_l2 <= tol {
            converged = true;
            break;
        }
        if iter == case.max_outer_iterations {
            break;
        }
        let dx = match solve_linear(&system) {
            Ok(dx) => dx,
            Err(e) => {
                failure = Some(e.to_string());
                break;
            }
        };
        let applied = corrector(dx);
        last_max = apply_correction(case, &mut state, &applied);
        history.push(IterationRecord { iter, residual_l2: system.residual_l2, max_correction: last_max });
    }

    ConvergenceReport {
        iterations: history.len(),
        final_max_correction: history.last().map_or(0.0, |r| r.max_correction),
        history,
        final_residual,
        converged,
        final_state: state,
        failure,
    }
}
