//! Fault-tolerant resource tables for the nozzle solvers.
//!
//!     cargo run --example resource_table -- table2

use qles_measure::resources::{build_table, code_distance, oracle_time, CostBasis, ErrorCorrectionParams, FixtureSet};

fn main() -> qles_measure::Result<()> {
    let set = match std::env::args().nth(1).as_deref() {
        Some("table2") => FixtureSet::table_two(),
        _ => FixtureSet::table_one(),
    };
    let params = ErrorCorrectionParams::default();
    for basis in [CostBasis::Reported, CostBasis::Model] {
        println!("{} ({basis:?} costs)", set.name);
        println!(
            "{:>3} {:>6} {:>3} {:>10} {:>10} {:>10} {:>3} {:>10} {:>10} {:>10} {:>7}",
            "AE", "eps", "s", "phys", "T", "Toffoli", "d", "time_s", "calls", "days", "%"
        );
        for r in build_table(&set, &params, basis)? {
            let pct = r.percentage_of_amplitudes.map(|p| format!("{p:.2}")).unwrap_or_default();
            println!(
                "{:>3} {:>6.0e} {:>3} {:>10.3e} {:>10.3e} {:>10.3e} {:>3} {:>10.3e} {:>10.3e} {:>10.3e} {:>7}",
                if r.amplitude_estimation { "yes" } else { "no" },
                r.accuracy,
                r.stations,
                r.physical_qubits,
                r.t_gates,
                r.toffoli_gates,
                r.code_distance,
                r.oracle_time_s,
                r.oracle_calls,
                r.total_time_days,
                pct
            );
        }
    }
    let row = &set.rows.iter().find(|r| !r.amplitude_estimation && r.stations == set.rows[0].stations).unwrap();
    let n_l = set.encoding(row.stations)?.logical_qubits;
    let d = code_distance(&params, row.t_gates + 2.0 * row.toffoli_gates, n_l)?;
    println!(
        "first naive row: d={d}, oracle time {:.3e} s (table {:.3e} s)",
        oracle_time(row.t_gates, row.toffoli_gates, d, &params),
        row.oracle_time_s
    );
    Ok(())
}
