use serde::{Deserialize, Serialize};

use super::BlockEncodingSpec;
use crate::{Error, Result};

const TABLE_ONE: &str = include_str!("../../fixtures/table1.json");
const TABLE_TWO: &str = include_str!("../../fixtures/table2.json");

/// One published table row, columns as printed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureRow {
    pub amplitude_estimation: bool,
    pub accuracy: f64,
    pub stations: usize,
    pub phase_factors: f64,
    pub kappa: f64,
    pub logical_qubits: u64,
    pub physical_qubits: f64,
    pub t_gates: f64,
    pub toffoli_gates: f64,
    pub oracle_time_s: f64,
    pub oracle_calls: f64,
    pub total_time_days: f64,
    pub percentage_of_amplitudes: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureSet {
    pub name: String,
    /// Per-station block-encoding costs.
    pub block_encodings: Vec<StationEncoding>,
    pub rows: Vec<FixtureRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationEncoding {
    pub stations: usize,
    #[serde(flatten)]
    pub spec: BlockEncodingSpec,
}

impl FixtureSet {
    /// Uncoupled compressible nozzle, `s = 8, 16`.
    pub fn table_one() -> Self {
        serde_json::from_str(TABLE_ONE).expect("bundled fixture parses")
    }

    /// Toeplitz block encoding, `s = 16, 32`.
    pub fn table_two() -> Self {
        serde_json::from_str(TABLE_TWO).expect("bundled fixture parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let set: Self = serde_json::from_str(text)?;
        set.validate()?;
        Ok(set)
    }

    pub fn encoding(&self, stations: usize) -> Result<&BlockEncodingSpec> {
        self.block_encodings
            .iter()
            .find(|e| e.stations == stations)
            .map(|e| &e.spec)
            .ok_or_else(|| Error::Model(format!("no block encoding for {stations} stations")))
    }

    pub fn validate(&self) -> Result<()> {
        for e in &self.block_encodings {
            e.spec.validate()?;
        }
        for r in &self.rows {
            let be = self.encoding(r.stations)?;
            if be.kappa != r.kappa || be.logical_qubits != r.logical_qubits {
                return Err(Error::Model(format!("row at s={} disagrees with its block encoding", r.stations)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_load() {
        for set in [FixtureSet::table_one(), FixtureSet::table_two()] {
            set.validate().unwrap();
            assert_eq!(set.rows.len(), 16);
            assert_eq!(set.rows.iter().filter(|r| r.amplitude_estimation).count(), 8);
        }
    }

    #[test]
    fn first_rows_match_publication() {
        let one = FixtureSet::table_one();
        let r = &one.rows[0];
        assert!(r.amplitude_estimation && r.accuracy == 1e-5 && r.stations == 8);
        assert_eq!((r.phase_factors, r.kappa, r.logical_qubits), (8.83e4, 48.13, 35));
        let two = FixtureSet::table_two();
        let r = &two.rows[0];
        assert!(r.amplitude_estimation && r.accuracy == 1e-5 && r.stations == 16);
        assert_eq!((r.phase_factors, r.kappa, r.logical_qubits), (1.31e5, 2.97, 41));
    }
}
