//! Noiseless outer loop on the nozzle, for both solver variants.
//!
//!     cargo run --example solve_nozzle -- 16

use qles_measure::nozzle::{assemble_system, build_case, run_outer_loop, subnormalisation_kappa, Regime, SolverKind};

fn main() -> qles_measure::Result<()> {
    let stations: usize = std::env::args().nth(1).map(|s| s.parse().expect("station count")).unwrap_or(8);
    for (regime, solver) in [
        (Regime::Incompressible, SolverKind::Simple),
        (Regime::Incompressible, SolverKind::Coupled),
        (Regime::Compressible, SolverKind::Simple),
        (Regime::Compressible, SolverKind::Coupled),
    ] {
        let case = build_case(stations, regime, solver)?;
        let first = assemble_system(&case, &case.initial_state())?;
        let kappa = subnormalisation_kappa(&first.matrix)?;
        let rep = run_outer_loop(&case, |dx| dx);
        println!(
            "{regime:?}/{solver:?}: converged={} after {} iterations, |δb|={:.2e}, κ(first system)={kappa:.2}",
            rep.converged, rep.iterations, rep.final_residual
        );
        let u = &rep.final_state.velocity;
        println!("  outlet velocity {:.6}, inlet pressure {:.6}", u[u.len() - 1], rep.final_state.pressure[0]);
    }
    Ok(())
}
