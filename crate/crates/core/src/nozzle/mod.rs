//! Quasi-1D convergent-divergent nozzle on a staggered grid.
//!
//! Pressure and density live at `s` cell centres; velocity lives on the
//! right face of each cell, the last one being the outlet. The inlet face
//! carries a fixed mass flux and the outlet a fixed pressure. Each outer
//! iteration linearises the discrete equations about the current state
//! (frozen mass flux, lagged density), producing the `2s × 2s` system
//! `A δx = δb` whose solution is applied as a correction.

mod assemble;
mod linear;
mod outer;

pub use assemble::{assemble_system, linearise, Linearisation};
pub use linear::{condition_estimate, solve_linear, subnormalisation_kappa};
pub use outer::{run_outer_loop, ConvergenceReport, IterationRecord};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Inlet mass flux `ρ A u` at the upstream face.
pub const INLET_MASS_FLUX: f64 = 1.0;
/// Fixed static (gauge) pressure behind the outlet face.
pub const OUTLET_PRESSURE: f64 = 1.0;
/// Isothermal sound speed squared for the compressible closure.
pub const SOUND_SPEED_SQ: f64 = 10.0;
/// Offset between gauge and absolute pressure, chosen so the uniform
/// initial guess (p = 1, ρ = 1) satisfies the equation of state.
pub const PRESSURE_OFFSET: f64 = SOUND_SPEED_SQ - 1.0;
/// Relative depth of the throat: `A(x) = 1 - THROAT_DEPTH·sin(πx)`.
pub const THROAT_DEPTH: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Incompressible,
    Compressible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Simple,
    Coupled,
}

/// Under-relaxation factors for the SIMPLE split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Relaxation {
    pub velocity: f64,
    pub pressure: f64,
}

impl Default for Relaxation {
    fn default() -> Self {
        Self { velocity: 0.7, pressure: 0.3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NozzleCase {
    pub stations: usize,
    /// Face areas, `stations + 1` entries; index 0 is the inlet face and
    /// index `stations` the outlet.
    pub area: Vec<f64>,
    pub regime: Regime,
    pub solver: SolverKind,
    pub eps_tol: f64,
    pub max_outer_iterations: usize,
    pub relaxation: Relaxation,
}

/// Builds a case with a symmetric sine-throat profile.
pub fn build_case(stations: usize, regime: Regime, solver: SolverKind) -> Result<NozzleCase> {
    if stations < 2 {
        return Err(Error::InvalidCase(format!("need at least 2 stations, got {stations}")));
    }
    let area = (0..=stations)
        .map(|j| {
            let x = j as f64 / stations as f64;
            1.0 - THROAT_DEPTH * (std::f64::consts::PI * x).sin()
        })
        .collect();
    let case = NozzleCase {
        stations,
        area,
        regime,
        solver,
        eps_tol: 1e-9,
        max_outer_iterations: 10_000,
        relaxation: Relaxation::default(),
    };
    case.validate()?;
    Ok(case)
}

impl NozzleCase {
    pub fn validate(&self) -> Result<()> {
        let s = self.stations;
        if s < 2 {
            return Err(Error::InvalidCase(format!("need at least 2 stations, got {s}")));
        }
        if self.area.len() != s + 1 {
            return Err(Error::InvalidCase(format!("area profile has {} faces, expected {}", self.area.len(), s + 1)));
        }
        if self.area.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::InvalidCase("area must be finite and positive".into()));
        }
        if !has_single_throat(&self.area) {
            return Err(Error::InvalidCase("area profile must have one interior throat".into()));
        }
        if !(self.eps_tol > 0.0) {
            return Err(Error::InvalidCase(format!("eps_tol must be positive, got {}", self.eps_tol)));
        }
        let Relaxation { velocity, pressure } = self.relaxation;
        if !(velocity > 0.0 && velocity <= 1.0 && pressure > 0.0 && pressure <= 1.0) {
            return Err(Error::InvalidCase("relaxation factors must lie in (0, 1]".into()));
        }
        Ok(())
    }

    pub fn system_size(&self) -> usize {
        2 * self.stations
    }

    /// Uniform `u = p = ρ = 1` starting field.
    pub fn initial_state(&self) -> FlowState {
        let s = self.stations;
        FlowState { velocity: vec![1.0; s], pressure: vec![1.0; s], density: vec![1.0; s], iteration: 0 }
    }

    /// Density implied by a cell pressure.
    pub fn density_from_pressure(&self, p: f64) -> f64 {
        match self.regime {
            Regime::Incompressible => 1.0,
            Regime::Compressible => (p + PRESSURE_OFFSET) / SOUND_SPEED_SQ,
        }
    }
}

/// Strictly decreasing to a minimum plateau of at most two faces, then
/// strictly increasing, with the minimum away from both ends.
fn has_single_throat(area: &[f64]) -> bool {
    let n = area.len();
    let min = area.iter().cloned().fold(f64::INFINITY, f64::min);
    let first = area.iter().position(|&a| a == min).unwrap_or(0);
    let last = area.iter().rposition(|&a| a == min).unwrap_or(0);
    if first == 0 || last == n - 1 || last - first > 1 {
        return false;
    }
    area[..=first].windows(2).all(|w| w[1] < w[0]) && area[last..].windows(2).all(|w| w[1] > w[0])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub velocity: Vec<f64>,
    pub pressure: Vec<f64>,
    pub density: Vec<f64>,
    pub iteration: usize,
}

impl FlowState {
    pub fn is_finite(&self) -> bool {
        self.velocity.iter().chain(&self.pressure).chain(&self.density).all(|v| v.is_finite())
    }

    /// `[u; p]`, the unknown vector of the linear system.
    pub fn unknowns(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.velocity.len() + self.pressure.len(),
            self.velocity.iter().chain(&self.pressure).cloned(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: nalgebra::DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub residual_l2: f64,
}

impl LinearSystem {
    pub fn new(matrix: nalgebra::DMatrix<f64>, rhs: DVector<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() != rhs.len() {
            return Err(Error::Assembly(format!(
                "inconsistent dimensions {}x{} and {}",
                matrix.nrows(),
                matrix.ncols(),
                rhs.len()
            )));
        }
        let residual_l2 = rhs.norm();
        Ok(Self { matrix, rhs, residual_l2 })
    }
}

/// A correction `δx = [δu; δp]` together with its unit-norm copy.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionVector {
    values: DVector<f64>,
    normalised: DVector<f64>,
    norm: f64,
}

impl CorrectionVector {
    pub fn new(values: DVector<f64>) -> Self {
        let norm = values.norm();
        let normalised = if norm > 0.0 { &values / norm } else { values.clone() };
        Self { values, normalised, norm }
    }

    /// Rebuilds a correction from a (possibly perturbed) unit vector and a
    /// scale.
    pub fn from_normalised(unit: DVector<f64>, norm: f64) -> Self {
        Self::new(unit * norm)
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    /// Zero vector when `δx = 0`.
    pub fn normalised(&self) -> &DVector<f64> {
        &self.normalised
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.amax()
    }

    pub fn into_values(self) -> DVector<f64> {
        self.values
    }
}
