use nalgebra::{DMatrix, DVector};

use super::{FlowState, LinearSystem, NozzleCase, SolverKind, INLET_MASS_FLUX, OUTLET_PRESSURE};
use crate::{Error, Result};

/// Picard linearisation `A^n x = b^n` of the discrete equations about a
/// state. Rows `0..s` are face momentum, rows `s..2s` cell continuity.
#[derive(Debug, Clone, PartialEq)]
pub struct Linearisation {
    pub operator: DMatrix<f64>,
    pub source: DVector<f64>,
}

impl Linearisation {
    /// `b − A x` at the given unknowns.
    pub fn residual(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.source - &self.operator * x
    }
}

pub fn linearise(case: &NozzleCase, state: &FlowState) -> Result<Linearisation> {
    let s = case.stations;
    if state.velocity.len() != s || state.pressure.len() != s || state.density.len() != s {
        return Err(Error::Assembly(format!("state does not match {s} stations")));
    }
    if !state.is_finite() {
        return Err(Error::Assembly("non-finite flow state".into()));
    }
    if state.density.iter().any(|&r| r <= 0.0) {
        return Err(Error::Assembly("non-positive density".into()));
    }
    let area = &case.area;
    let rho = &state.density;
    let u = &state.velocity;
    let inlet_velocity = INLET_MASS_FLUX / area[0];

    let mut a = DMatrix::zeros(2 * s, 2 * s);
    let mut b = DVector::zeros(2 * s);

    // Momentum on face k+1: F_k (u_k − u_{k−1}) + A_{k+1} (p_{k+1} − p_k) = 0,
    // with the upwind mass flux F_k frozen at the current iterate.
    for k in 0..s {
        let flux = rho[k] * area[k + 1] * u[k];
        a[(k, k)] = flux;
        if k == 0 {
            b[0] += flux * inlet_velocity;
        } else {
            a[(k, k - 1)] = -flux;
        }
        a[(k, s + k)] = -area[k + 1];
        if k + 1 < s {
            a[(k, s + k + 1)] = area[k + 1];
        } else {
            b[k] -= area[k + 1] * OUTLET_PRESSURE;
        }
    }
    // Continuity in cell i: ρ_i A_{i+1} u_i − ρ_{i−1} A_i u_{i−1} = 0,
    // the inlet face contributing the fixed mass flux.
    for i in 0..s {
        a[(s + i, i)] = rho[i] * area[i + 1];
        if i == 0 {
            b[s] = INLET_MASS_FLUX;
        } else {
            a[(s + i, i - 1)] = -rho[i - 1] * area[i];
        }
    }
    Ok(Linearisation { operator: a, source: b })
}

/// The system handed to the linear solver for one outer iteration.
///
/// For the coupled solver the matrix is the Picard operator itself. For
/// SIMPLE it is the operator of the segregated pressure-correction step
/// with under-relaxation, `[[M_r, M_r D_m⁻¹ G / α_p], [D, 0]]`, where `M_r`
/// is the momentum block with its diagonal divided by `α_u` and `D_m` its
/// diagonal; solving it is algebraically the predictor, pressure
/// correction and velocity update sequence. In both cases the right-hand
/// side is the nonlinear residual `δb = b − A x`.
pub fn assemble_system(case: &NozzleCase, state: &FlowState) -> Result<LinearSystem> {
    let lin = linearise(case, state)?;
    let rhs = lin.residual(&state.unknowns());
    let matrix = match case.solver {
        SolverKind::Coupled => lin.operator,
        SolverKind::Simple => simple_operator(case, &lin.operator),
    };
    if matrix.iter().chain(rhs.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Assembly("non-finite coefficients".into()));
    }
    LinearSystem::new(matrix, rhs)
}

fn simple_operator(case: &NozzleCase, op: &DMatrix<f64>) -> DMatrix<f64> {
    let s = case.stations;
    let alpha_u = case.relaxation.velocity;
    let alpha_p = case.relaxation.pressure;
    let mut m_r = op.view((0, 0), (s, s)).into_owned();
    for k in 0..s {
        m_r[(k, k)] /= alpha_u;
    }
    let g = op.view((0, s), (s, s));
    let mut dm_inv_g = g.into_owned();
    for k in 0..s {
        let d = m_r[(k, k)];
        dm_inv_g.row_mut(k).scale_mut(1.0 / d);
    }
    let coupling = &m_r * dm_inv_g / alpha_p;
    let mut out = DMatrix::zeros(2 * s, 2 * s);
    out.view_mut((0, 0), (s, s)).copy_from(&m_r);
    out.view_mut((0, s), (s, s)).copy_from(&coupling);
    out.view_mut((s, 0), (s, s)).copy_from(&op.view((s, 0), (s, s)));
    out
}
