use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{
    code_distance, oracle_calls, oracle_time, percentage_of_amplitudes, physical_qubits, total_gate_counts,
    ErrorCorrectionParams, FixtureSet, InversionSpec,
};
use crate::Result;

const SECONDS_PER_DAY: f64 = 86_400.0;

/// Where the per-call cost columns come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostBasis {
    /// Everything recomputed from the block-encoding costs.
    Model,
    /// Published gate counts, qubits, oracle time and calls; totals and
    /// percentages recomputed from them.
    Reported,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceRow {
    pub amplitude_estimation: bool,
    pub accuracy: f64,
    pub stations: usize,
    pub phase_factors: f64,
    pub kappa: f64,
    pub logical_qubits: u64,
    pub physical_qubits: f64,
    pub t_gates: f64,
    pub toffoli_gates: f64,
    pub code_distance: u32,
    pub oracle_time_s: f64,
    pub oracle_calls: f64,
    pub total_time_days: f64,
    /// Only on naive rows that have a matching amplitude-estimation row.
    pub percentage_of_amplitudes: Option<f64>,
}

pub fn build_table(set: &FixtureSet, params: &ErrorCorrectionParams, basis: CostBasis) -> Result<Vec<ResourceRow>> {
    set.validate()?;
    params.validate()?;
    let mut rows = Vec::with_capacity(set.rows.len());
    for f in &set.rows {
        let be = set.encoding(f.stations)?;
        let inv = InversionSpec::new(f.phase_factors, f.accuracy)?;
        let gates = total_gate_counts(be, &inv, f.amplitude_estimation, params)?;
        let (t, toffoli) = match basis {
            CostBasis::Model => (gates.t, gates.toffoli),
            CostBasis::Reported => (f.t_gates, f.toffoli_gates),
        };
        let magic = t + params.toffoli_magic_factor * toffoli;
        let d = code_distance(params, magic, be.logical_qubits)?;
        let (physical, time, calls) = match basis {
            CostBasis::Model => (
                physical_qubits(be.logical_qubits, d, params) as f64,
                oracle_time(t, toffoli, d, params),
                oracle_calls(f.accuracy, f.amplitude_estimation)?,
            ),
            CostBasis::Reported => (f.physical_qubits, f.oracle_time_s, f.oracle_calls),
        };
        rows.push(ResourceRow {
            amplitude_estimation: f.amplitude_estimation,
            accuracy: f.accuracy,
            stations: f.stations,
            phase_factors: f.phase_factors,
            kappa: be.kappa,
            logical_qubits: be.logical_qubits,
            physical_qubits: physical,
            t_gates: t,
            toffoli_gates: toffoli,
            code_distance: d,
            oracle_time_s: time,
            oracle_calls: calls,
            total_time_days: calls * time / SECONDS_PER_DAY,
            percentage_of_amplitudes: None,
        });
    }
    for i in 0..rows.len() {
        if rows[i].amplitude_estimation {
            continue;
        }
        let partner = rows
            .iter()
            .find(|r| r.amplitude_estimation && r.stations == rows[i].stations && r.accuracy == rows[i].accuracy)
            .map(|r| r.total_time_days);
        if let Some(ae_total) = partner {
            let n = set.encoding(rows[i].stations)?.amplitudes;
            rows[i].percentage_of_amplitudes = Some(percentage_of_amplitudes(rows[i].total_time_days, ae_total, n)?);
        }
    }
    Ok(rows)
}

pub const CSV_COLUMNS: [&str; 13] = [
    "amplitude_estimation",
    "accuracy",
    "stations",
    "phase_factors",
    "kappa",
    "logical_qubits",
    "physical_qubits",
    "t_gates",
    "toffoli_gates",
    "oracle_time_s",
    "oracle_calls",
    "total_time_days",
    "percentage_of_amplitudes",
];

/// Table-shaped CSV; percentages to two decimals, blank where undefined.
pub fn write_table_csv<W: Write>(rows: &[ResourceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.amplitude_estimation.to_string(),
            r.accuracy.to_string(),
            r.stations.to_string(),
            r.phase_factors.to_string(),
            r.kappa.to_string(),
            r.logical_qubits.to_string(),
            r.physical_qubits.to_string(),
            r.t_gates.to_string(),
            r.toffoli_gates.to_string(),
            r.oracle_time_s.to_string(),
            r.oracle_calls.to_string(),
            r.total_time_days.to_string(),
            r.percentage_of_amplitudes.map(|p| format!("{p:.2}")).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
