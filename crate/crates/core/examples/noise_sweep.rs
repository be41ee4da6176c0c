//! Gaussian measurement noise plus amplitude cutoff inside the outer loop.

use qles_measure::noise::{run_noisy_sweep, NoiseTarget, SweepOptions};
use qles_measure::nozzle::{build_case, Regime, SolverKind};

fn main() -> qles_measure::Result<()> {
    let case = build_case(8, Regime::Incompressible, SolverKind::Simple)?;
    let eps = [1e-5, 1e-4, 1e-3, 1e-2];
    let alpha = [0.0, 0.5, 0.9];
    for target in [NoiseTarget::Normalised, NoiseTarget::Absolute] {
        let opts = SweepOptions { seed: 7, iteration_cap: 2_000, target, ..Default::default() };
        let res = run_noisy_sweep(&case, &eps, &alpha, 3, opts)?;
        println!("{target:?} noise");
        println!("{:>8} {:>5} {:>12} {:>10} {:>6}", "eps", "alpha", "max_error", "converged", "iters");
        for c in &res.cells {
            println!("{:>8.0e} {:>5} {:>12.3e} {:>10} {:>6}", c.eps, c.alpha, c.max_error, c.converged, c.iterations);
        }
    }
    Ok(())
}
