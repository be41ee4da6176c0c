use nalgebra::{DMatrix, DVector};

use super::{CorrectionVector, LinearSystem};
use crate::{Error, Result};

/// Systems whose 1-norm condition estimate exceeds this are refused.
const MAX_CONDITION: f64 = 1e13;
const RELATIVE_RESIDUAL: f64 = 1e-10;

fn norm_1(a: &DMatrix<f64>) -> f64 {
    a.column_iter().map(|c| c.lp_norm(1)).fold(0.0, f64::max)
}

fn norm_inf(a: &DMatrix<f64>) -> f64 {
    a.row_iter().map(|r| r.lp_norm(1)).fold(0.0, f64::max)
}

/// `‖A‖₁ ‖A⁻¹‖₁`, or infinity for a singular matrix.
pub fn condition_estimate(a: &DMatrix<f64>) -> f64 {
    match a.clone().try_inverse() {
        Some(inv) => norm_1(a) * norm_1(&inv),
        None => f64::INFINITY,
    }
}

/// Dense LU solve with one step of iterative refinement.
pub fn solve_linear(system: &LinearSystem) -> Result<CorrectionVector> {
    let a = &system.matrix;
    let b = &system.rhs;
    if system.residual_l2 == 0.0 {
        return Ok(CorrectionVector::new(DVector::zeros(b.len())));
    }
    let condition = condition_estimate(a);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::Solver { condition, reason: "matrix singular or ill-conditioned".into() });
    }
    let lu = a.clone().lu();
    let mut x = lu.solve(b).ok_or(Error::Solver { condition, reason: "LU solve failed".into() })?;
    let target = RELATIVE_RESIDUAL * system.residual_l2;
    let mut residual = b - a * &x;
    if residual.norm() > target {
        if let Some(dx) = lu.solve(&residual) {
            x += dx;
            residual = b - a * &x;
        }
    }
    let achieved = residual.norm();
    if !(achieved <= target) {
        return Err(Error::Solver { condition, reason: format!("residual {achieved:.3e} above {target:.3e}") });
    }
    Ok(CorrectionVector::new(x))
}

/// `κ = 2 / (3 ‖A‖_∞ σ_min)`.
pub fn subnormalisation_kappa(a: &DMatrix<f64>) -> Result<f64> {
    if a.iter().all(|v| *v == 0.0) {
        return Err(Error::InvalidParameter("zero matrix".into()));
    }
    let sigma_min = a.clone().singular_values().iter().cloned().fold(f64::INFINITY, f64::min);
    if sigma_min == 0.0 || a.nrows() != a.ncols() {
        return Err(Error::SingularMatrix);
    }
    Ok(2.0 / (3.0 * norm_inf(a) * sigma_min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nozzle::{assemble_system, build_case, Regime, SolverKind};
    use proptest::prelude::*;

    /// Textbook Gaussian elimination with partial pivoting, kept independent
    /// of nalgebra's LU.
    fn gauss(a: &DMatrix<f64>, b: &DVector<f64>) -> Vec<f64> {
        let n = b.len();
        let mut m: Vec<Vec<f64>> = (0..n).map(|r| (0..n).map(|c| a[(r, c)]).chain([b[r]]).collect()).collect();
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())).unwrap();
            m.swap(col, piv);
            let (top, rest) = m.split_at_mut(col + 1);
            let pivot_row = &top[col];
            for row in rest.iter_mut() {
                let f = row[col] / pivot_row[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
            }
        }
        let mut x = vec![0.0; n];
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
            x[r] = (m[r][n] - s) / m[r][r];
        }
        x
    }

    #[test]
    fn identity_system() {
        let mut e1 = DVector::zeros(5);
        e1[0] = 1.0;
        let sys = LinearSystem::new(DMatrix::identity(5, 5), e1.clone()).unwrap();
        assert_eq!(solve_linear(&sys).unwrap().values(), &e1);
    }

    #[test]
    fn first_nozzle_system_matches_elimination() {
        for solver in [SolverKind::Simple, SolverKind::Coupled] {
            let c = build_case(8, Regime::Incompressible, solver).unwrap();
            let sys = assemble_system(&c, &c.initial_state()).unwrap();
            let dx = solve_linear(&sys).unwrap();
            let reference = gauss(&sys.matrix, &sys.rhs);
            for (a, b) in dx.values().iter().zip(&reference) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn singular_matrix_reports_condition() {
        let sys = LinearSystem::new(DMatrix::zeros(3, 3), DVector::from_element(3, 1.0)).unwrap();
        match solve_linear(&sys) {
            Err(Error::Solver { condition, .. }) => assert!(condition.is_infinite()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn kappa_examples() {
        let k = subnormalisation_kappa(&DMatrix::identity(4, 4)).unwrap();
        assert!((k - 2.0 / 3.0).abs() < 1e-15);
        let k = subnormalisation_kappa(&(DMatrix::identity(3, 3) * 2.0)).unwrap();
        assert!((k - 1.0 / 6.0).abs() < 1e-15);
        let k = subnormalisation_kappa(&DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.25]))).unwrap();
        assert!((k - 8.0 / 3.0).abs() < 1e-12);
        let singular = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(subnormalisation_kappa(&singular), Err(Error::SingularMatrix)));
    }

    fn well_conditioned(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
        proptest::collection::vec(-1.0f64..1.0, n * n)
            .prop_map(move |v| DMatrix::from_vec(n, n, v) + DMatrix::identity(n, n) * (n as f64))
    }

    proptest! {
        #[test]
        fn random_system_residual(a in well_conditioned(16), b in proptest::collection::vec(-1.0f64..1.0, 16)) {
            let b = DVector::from_vec(b);
            let sys = LinearSystem::new(a.clone(), b.clone()).unwrap();
            let x = solve_linear(&sys).unwrap();
            let r = (&a * x.values() - &b).norm();
            prop_assert!(r <= 1e-10 * b.norm());
        }

        #[test]
        fn kappa_sign_and_scale(a in well_conditioned(6), c in 0.1f64..10.0) {
            let k = subnormalisation_kappa(&a).unwrap();
            let neg = subnormalisation_kappa(&(-a.clone())).unwrap();
            let scaled = subnormalisation_kappa(&(a.clone() * c)).unwrap();
            prop_assert!((k - neg).abs() <= 1e-12 * k);
            prop_assert!((scaled - k / (c * c)).abs() <= 1e-9 * k / (c * c));
        }
    }
}
