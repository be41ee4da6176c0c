use serde::Serialize;

use crate::resources::BlockEncodingSpec;
use crate::{Error, Result};

/// Leading constant of the empirical query model (fitted at `a = 0.5`).
pub const QUERY_A: f64 = 1.71;
pub const QUERY_B: f64 = 2.18;
/// Inner constant of the signed variant.
pub const SIGNED_QUERY_B: f64 = 2.08;
/// Accuracy range the constants were fitted on.
pub const FIT_RANGE: (f64, f64) = (1e-6, 1e-3);
const VALID_RANGE: (f64, f64) = (1e-6, 1e-1);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelQueries {
    pub queries: f64,
    /// False when `eps` lies outside the fitted range.
    pub within_fit: bool,
}

/// Mean query count `(A/ε) ln(B ln(1/ε))`; the signed variant halves the
/// accuracy, `(A/2ε) ln(B' ln(1/2ε))`.
pub fn model_query_complexity(eps: f64, signed: bool) -> Result<ModelQueries> {
    if !(VALID_RANGE.0..=VALID_RANGE.1).contains(&eps) {
        return Err(Error::InvalidParameter(format!(
            "query model defined for eps in [{:e}, {:e}], got {eps:e}",
            VALID_RANGE.0, VALID_RANGE.1
        )));
    }
    let queries = if signed {
        let e = 2.0 * eps;
        QUERY_A / e * (SIGNED_QUERY_B * (1.0 / e).ln()).ln()
    } else {
        QUERY_A / eps * (QUERY_B * (1.0 / eps).ln()).ln()
    };
    let within_fit = (FIT_RANGE.0..=FIT_RANGE.1).contains(&eps);
    Ok(ModelQueries { queries, within_fit })
}

/// Cost of one query to the signed amplitude-estimation oracle built
/// around a degree-`d_poly` inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateCost {
    /// `2 d M_C`, Toffoli part.
    pub block_toffoli: f64,
    /// `2 d M_C`, T part.
    pub block_t: f64,
    /// `2n` Toffolis for the projector rotations and controlled shift.
    pub extra_toffoli: f64,
    /// `4d + 2` single-qubit rotations, controlled ones counted twice.
    pub rotations: f64,
    /// `M_qb + 2`.
    pub qubits: u64,
}

pub fn oracle_gate_cost(d_poly: f64, be: &BlockEncodingSpec, n: u32) -> GateCost {
    GateCost {
        block_toffoli: 2.0 * d_poly * be.toffoli_per_phase_factor,
        block_t: 2.0 * d_poly * be.t_per_phase_factor,
        extra_toffoli: 2.0 * f64::from(n),
        rotations: 4.0 * d_poly + 2.0,
        qubits: be.qubit_cost + 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn be(toff: f64, qubits: u64) -> BlockEncodingSpec {
        BlockEncodingSpec {
            name: "test".into(),
            system_qubits: 4,
            logical_qubits: qubits,
            qubit_cost: qubits,
            toffoli_per_phase_factor: toff,
            t_per_phase_factor: 0.0,
            rotations_per_phase_factor: 1.0,
            kappa: 1.0,
            amplitudes: 16,
        }
    }

    #[test]
    fn unsigned_values() {
        let q = model_query_complexity(1e-3, false).unwrap();
        assert!((q.queries - 4638.0).abs() < 1.0, "{}", q.queries);
        assert!(q.within_fit);
        let q = model_query_complexity(1e-5, false).unwrap();
        assert!((q.queries / 5.51e5 - 1.0).abs() < 2e-3);
    }

    #[test]
    fn signed_value() {
        let q = model_query_complexity(1e-3, true).unwrap();
        assert!((q.queries - 2188.0).abs() < 1.0, "{}", q.queries);
    }

    #[test]
    fn fit_range_flag_and_domain() {
        assert!(!model_query_complexity(1e-2, false).unwrap().within_fit);
        assert!(model_query_complexity(0.5, false).is_err());
        assert!(model_query_complexity(1e-7, true).is_err());
    }

    #[test]
    fn strictly_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 0..=500 {
            let eps = 10f64.powf(-6.0 + 5.0 * i as f64 / 500.0);
            let q = model_query_complexity(eps, false).unwrap().queries;
            assert!(q < prev);
            prev = q;
        }
        let mut prev = f64::INFINITY;
        for i in 0..=500 {
            let eps = 10f64.powf(-6.0 + 5.0 * i as f64 / 500.0);
            let q = model_query_complexity(eps, true).unwrap().queries;
            assert!(q < prev);
            prev = q;
        }
    }

    #[test]
    fn gate_cost_formula() {
        let c = oracle_gate_cost(1.0, &be(0.0, 10), 0);
        assert_eq!(c.rotations, 6.0);
        assert_eq!(c.qubits, 12);
        assert_eq!(c.block_toffoli, 0.0);
        let c = oracle_gate_cost(8.83e4, &be(9.0, 35), 4);
        assert_eq!(c.rotations, 3.532e5 + 2.0);
        assert_eq!(c.block_toffoli, 2.0 * 7.947e5);
        assert_eq!(c.extra_toffoli, 8.0);
    }
}
