//! Fault-tolerant cost model: rotation synthesis, gate totals, surface-code
//! distance, physical footprint and wall-clock time per oracle call, plus
//! the table generator over the shipped fixtures.

mod fixtures;
mod table;

pub use fixtures::{FixtureRow, FixtureSet};
pub use table::{build_table, write_table_csv, CostBasis, ResourceRow, CSV_COLUMNS};

use serde::{Deserialize, Serialize};

use crate::ae::{model_query_complexity, oracle_gate_cost};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockEncodingSpec {
    pub name: String,
    /// `n`, qubits indexing the system vector.
    pub system_qubits: u32,
    /// `n_L`, algorithm plus block-encoding ancillas.
    pub logical_qubits: u64,
    /// `M_qb`.
    pub qubit_cost: u64,
    pub toffoli_per_phase_factor: f64,
    pub t_per_phase_factor: f64,
    /// Single-qubit rotations needed to apply one phase factor.
    pub rotations_per_phase_factor: f64,
    pub kappa: f64,
    /// Entries of the solution vector.
    pub amplitudes: u64,
}

impl BlockEncodingSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = self.logical_qubits > 0
            && self.qubit_cost > 0
            && self.amplitudes > 0
            && self.toffoli_per_phase_factor >= 0.0
            && self.t_per_phase_factor >= 0.0
            && self.rotations_per_phase_factor > 0.0
            && self.kappa > 0.0;
        if !positive {
            return Err(Error::Model(format!("block encoding {} has non-positive costs", self.name)));
        }
        Ok(())
    }
}

/// Polynomial degree and how the inversion accuracy is split between the
/// polynomial approximation and rotation synthesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionSpec {
    pub d_poly: f64,
    pub eps_inv: f64,
    pub polynomial_fraction: f64,
    pub rotation_fraction: f64,
}

impl InversionSpec {
    pub fn new(d_poly: f64, eps_inv: f64) -> Result<Self> {
        let s = Self { d_poly, eps_inv, polynomial_fraction: 0.9, rotation_fraction: 0.1 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d_poly >= 1.0) {
            return Err(Error::Model(format!("d_poly must be >= 1, got {}", self.d_poly)));
        }
        if !(self.eps_inv > 0.0 && self.eps_inv < 1.0) {
            return Err(Error::Model(format!("eps_inv must lie in (0, 1), got {}", self.eps_inv)));
        }
        if (self.polynomial_fraction + self.rotation_fraction - 1.0).abs() > 1e-12 {
            return Err(Error::Model("accuracy fractions must sum to 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factory {
    pub name: String,
    pub physical_qubits: u64,
    /// Magic states delivered per output period.
    pub states_per_period: u64,
    pub period_code_cycles: f64,
}

impl Default for Factory {
    fn default() -> Self {
        Self {
            name: "(15-to-1)^4_{9,3,3} x (20-to-4)_{15,7,9}".into(),
            physical_qubits: 18_000,
            states_per_period: 4,
            period_code_cycles: 80.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorCorrectionParams {
    pub p_phys: f64,
    pub p_thr: f64,
    pub fowler_prefactor: f64,
    pub p_fail_total: f64,
    pub p_fail_log: f64,
    pub p_fail_msd: f64,
    pub t_cycle_s: f64,
    /// T-equivalent magic states consumed per Toffoli.
    pub toffoli_magic_factor: f64,
    /// `R_T = ⌈c₁ log₂(1/ε_rot) + c₀⌉`.
    pub rotation_c1: f64,
    pub rotation_c0: f64,
    /// T gates charged per Toffoli when Toffolis are folded into a T count.
    pub t_per_toffoli: f64,
    pub max_distance: u32,
    pub factory: Factory,
}

impl Default for ErrorCorrectionParams {
    fn default() -> Self {
        Self {
            p_phys: 1e-4,
            p_thr: 0.01,
            fowler_prefactor: 0.1,
            p_fail_total: 0.01,
            p_fail_log: 0.009,
            p_fail_msd: 0.001,
            t_cycle_s: 1e-6,
            toffoli_magic_factor: 2.0,
            rotation_c1: 3.02,
            rotation_c0: 1.77,
            t_per_toffoli: 4.0,
            max_distance: 99,
            factory: Factory::default(),
        }
    }
}

impl ErrorCorrectionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_phys > 0.0 && self.p_phys < self.p_thr) {
            return Err(Error::Model("need 0 < p < p_thr".into()));
        }
        if !(self.p_fail_log > 0.0 && self.p_fail_msd > 0.0)
            || (self.p_fail_log + self.p_fail_msd - self.p_fail_total).abs() > 1e-12
        {
            return Err(Error::Model("failure budgets must be positive and sum to the total".into()));
        }
        if !(self.t_cycle_s > 0.0) {
            return Err(Error::Model("t_cycle must be positive".into()));
        }
        Ok(())
    }
}

/// T gates to synthesise one rotation to accuracy `eps_rot`.
pub fn rotation_t_cost(eps_rot: f64, params: &ErrorCorrectionParams) -> Result<u64> {
    if !(eps_rot > 0.0 && eps_rot < 1.0) {
        return Err(Error::Model(format!("eps_rot must lie in (0, 1), got {eps_rot}")));
    }
    Ok((params.rotation_c1 * (1.0 / eps_rot).log2() + params.rotation_c0).ceil() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateCounts {
    pub t: f64,
    pub toffoli: f64,
    pub rotations: f64,
    pub eps_rot: f64,
    pub t_per_rotation: u64,
}

/// T and Toffoli totals for one inversion circuit (naive) or one query to
/// the signed amplitude-estimation oracle.
///
/// The oracle doubles the block-encoding applications, adds `2n` Toffolis
/// for the projector and controlled shift (charged as T gates so that the
/// Toffoli column stays the block-encoding cost), and has `4d + 2` phase
/// rotations, controlled ones counted as two. The rotation share of the
/// accuracy budget is split evenly across all rotations.
pub fn total_gate_counts(
    be: &BlockEncodingSpec,
    inv: &InversionSpec,
    ae: bool,
    params: &ErrorCorrectionParams,
) -> Result<GateCounts> {
    be.validate()?;
    inv.validate()?;
    let d = inv.d_poly;
    let (toffoli, block_t, rotation_slots, extra_t) = if ae {
        let c = oracle_gate_cost(d, be, be.system_qubits);
        (c.block_toffoli, c.block_t, c.rotations, params.t_per_toffoli * c.extra_toffoli)
    } else {
        (d * be.toffoli_per_phase_factor, d * be.t_per_phase_factor, d, 0.0)
    };
    let rotations = rotation_slots * be.rotations_per_phase_factor;
    let eps_rot = inv.rotation_fraction * inv.eps_inv / rotations;
    let t_per_rotation = rotation_t_cost(eps_rot, params)?;
    Ok(GateCounts {
        t: block_t + rotations * t_per_rotation as f64 + extra_t,
        toffoli,
        rotations,
        eps_rot,
        t_per_rotation,
    })
}

fn fowler_lhs(d: u32, params: &ErrorCorrectionParams) -> f64 {
    params.fowler_prefactor * (params.p_phys / params.p_thr).powf(f64::from(d + 1) / 2.0)
}

/// Smallest odd distance `d ≥ 3` with
/// `A (p/p_thr)^((d+1)/2) ≤ p_fail_log / (N_T · n_qubits)`.
pub fn code_distance(params: &ErrorCorrectionParams, n_t: f64, n_qubits: u64) -> Result<u32> {
    if !(n_t >= 1.0) || n_qubits == 0 {
        return Err(Error::Model("need N_T >= 1 and at least one qubit".into()));
    }
    let budget = params.p_fail_log / (n_t * n_qubits as f64);
    (3..=params.max_distance)
        .step_by(2)
        .find(|&d| fowler_lhs(d, params) <= budget)
        .ok_or_else(|| Error::Model(format!("no odd distance <= {} meets the budget", params.max_distance)))
}

/// Factories needed to deliver one magic state every `d` code cycles.
pub fn factories_needed(d_code: u32, params: &ErrorCorrectionParams) -> u64 {
    let f = &params.factory;
    if f.physical_qubits == 0 {
        return 0;
    }
    (f.period_code_cycles / (f.states_per_period as f64 * f64::from(d_code))).ceil().max(1.0) as u64
}

/// Fast-block tiles `(2 n_L + ⌈√(8 n_L)⌉ + 1)` of `2d² − 1` qubits each,
/// plus the factories.
pub fn physical_qubits(n_l: u64, d_code: u32, params: &ErrorCorrectionParams) -> u64 {
    let tiles = 2 * n_l + (8.0 * n_l as f64).sqrt().ceil() as u64 + 1;
    let d = u64::from(d_code);
    tiles * (2 * d * d - 1) + factories_needed(d_code, params) * params.factory.physical_qubits
}

/// `(T + f·Toffoli) · d · t_cycle` seconds.
pub fn oracle_time(t: f64, toffoli: f64, d_code: u32, params: &ErrorCorrectionParams) -> f64 {
    (t + params.toffoli_magic_factor * toffoli) * f64::from(d_code) * params.t_cycle_s
}

/// Repetitions needed: `1/ε²` shots for the naive scheme, the signed
/// query model otherwise.
pub fn oracle_calls(eps: f64, ae: bool) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Model(format!("eps must lie in (0, 1), got {eps}")));
    }
    let raw = if ae { model_query_complexity(eps, true)?.queries } else { 1.0 / (eps * eps) };
    let nearest = raw.round();
    Ok(if (raw - nearest).abs() <= 1e-9 * nearest { nearest } else { raw.ceil() })
}

/// Share of the amplitudes that amplitude estimation can read one by one
/// in the time the naive scheme reads them all, capped at 100.
pub fn percentage_of_amplitudes(t_naive_total: f64, t_ae_total: f64, n_amplitudes: u64) -> Result<f64> {
    if !(t_naive_total > 0.0 && t_ae_total > 0.0 && n_amplitudes > 0) {
        return Err(Error::Model("times and amplitude count must be positive".into()));
    }
    let n_amp = (t_naive_total / t_ae_total).floor();
    Ok((100.0 * n_amp / n_amplitudes as f64).min(100.0))
}
