//! Von Neumann entropy, quantum relative entropy and the floored matrix
//! logarithm. All quantities are in nats.

use super::eigen::HermitianEigen;
use super::matrix::CMatrix;
use super::state::{DensityMatrix, HermitianOperator, PSD_TOL};
use crate::error::{Result, RslError};
use crate::scalar::Real;

/// Default eigenvalue floor for logarithms of full-rank-intended matrices.
pub const DEFAULT_FLOOR: f64 = 1e-12;
/// Weight of ρ on the null space of σ above which `S(ρ‖σ) = +∞`.
pub const SUPPORT_TOL: f64 = 1e-10;
/// Largest admissible eigenvalue floor.
pub const MAX_FLOOR: f64 = 1e-6;

pub(crate) fn check_floor<T: Real>(floor: T) -> Result<()> {
    if !(floor > T::zero() && floor <= T::lit(MAX_FLOOR)) {
        return Err(RslError::InvalidArgument(format!(
            "eigenvalue floor {} outside (0, 1e-6]",
            floor.to_f64_lossy()
        )));
    }
    Ok(())
}

/// `−Σ λ ln λ` over a spectrum, with `0 ln 0 = 0`.
pub fn entropy_of_spectrum<T: Real>(values: &[T]) -> T {
    values
        .iter()
        .filter(|&&l| l > T::zero())
        .map(|&l| -l * l.ln())
        .sum()
}

/// `S(ρ) = −Tr[ρ ln ρ]`.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    entropy_of_spectrum(&rho.eigen().values)
}

/// `U diag(ln max(λ, floor)) U†`.
pub fn matrix_log_floor<T: Real>(a: &DensityMatrix<T>, floor: T) -> Result<HermitianOperator<T>> {
    check_floor(floor)?;
    Ok(log_from_eigen(&a.eigen(), floor))
}

/// Floored logarithm of an arbitrary Hermitian positive semidefinite matrix.
pub fn matrix_log_floor_psd<T: Real>(a: &CMatrix<T>, floor: T) -> Result<HermitianOperator<T>> {
    check_floor(floor)?;
    let defect = a.hermiticity_defect();
    if defect > T::tol(super::state::HERMITIAN_TOL) {
        return Err(RslError::NotHermitian {
            defect: defect.to_f64_lossy(),
        });
    }
    let eig = HermitianEigen::new(a);
    if eig.min_value() < -T::tol(PSD_TOL) {
        return Err(RslError::InvalidState(format!(
            "matrix logarithm of non-PSD matrix (min eigenvalue {:.3e})",
            eig.min_value().to_f64_lossy()
        )));
    }
    Ok(log_from_eigen(&eig, floor))
}

pub(crate) fn log_from_eigen<T: Real>(eig: &HermitianEigen<T>, floor: T) -> HermitianOperator<T> {
    HermitianOperator::from_trusted(eig.map_values(|l| l.max(floor).ln()))
}

/// Weight `Tr[ρ P₀]` of ρ on the eigenspace of σ with eigenvalues `≤ floor`.
pub(crate) fn null_space_weight<T: Real>(rho: &CMatrix<T>, sigma: &HermitianEigen<T>, floor: T) -> T {
    (0..sigma.dim())
        .filter(|&k| sigma.values[k] <= floor)
        .map(|k| rho.expectation(&sigma.vector(k)))
        .sum()
}

/// `S(ρ‖σ) = −S(ρ) − Tr[ρ log σ]`, with `log σ` floored at `floor`.
///
/// Returns `+∞` when ρ has weight above [`SUPPORT_TOL`] outside the support
/// of σ.
pub fn relative_entropy<T: Real>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
    floor: T,
) -> Result<T> {
    check_floor(floor)?;
    check_same_dim(rho, sigma)?;
    let sigma_eig = sigma.eigen();
    if null_space_weight(rho.matrix(), &sigma_eig, floor) > T::tol(SUPPORT_TOL) {
        return Ok(T::infinity());
    }
    let log_sigma = log_from_eigen(&sigma_eig, floor);
    Ok(-von_neumann_entropy(rho) - log_sigma.trace_with(rho.matrix()))
}

/// `−S(ρ) − Tr[ρ log_floor σ]` without the support check; finite for any
/// pair of states.
pub fn relative_entropy_floored<T: Real>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
    floor: T,
) -> Result<T> {
    check_floor(floor)?;
    check_same_dim(rho, sigma)?;
    let log_sigma = matrix_log_floor(sigma, floor)?;
    Ok(-von_neumann_entropy(rho) - log_sigma.trace_with(rho.matrix()))
}

fn check_same_dim<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(RslError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::states;

    #[test]
    fn bell_state_is_pure() {
        let s = von_neumann_entropy(&states::bell_phi_plus::<f64>());
        assert!(s.abs() < 1e-14);
    }

    #[test]
    fn maximally_mixed_qubit() {
        let s = von_neumann_entropy(&DensityMatrix::<f64>::maximally_mixed(vec![2]));
        assert!((s - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn werner_entropy_matches_closed_form() {
        // closed form from the Werner spectrum {1 − 3p/4, p/4, p/4, p/4}
        for p in [0.1f64, 0.37, 0.5, 0.9, 1.0] {
            let closed = -(1.0 - 0.75 * p) * (1.0 - 0.75 * p).ln() - 0.75 * p * (p / 4.0).ln();
            let s = von_neumann_entropy(&states::werner::<f64>(p).unwrap());
            assert!((s - closed).abs() < 1e-13, "p = {p}");
        }
    }

    #[test]
    fn relative_entropy_of_identical_states_vanishes() {
        let rho = states::werner::<f64>(0.3).unwrap();
        assert!(relative_entropy(&rho, &rho, 1e-12).unwrap().abs() < 1e-14);
    }

    #[test]
    fn bell_against_dephased_bell_is_ln2() {
        let rho = states::bell_phi_plus::<f64>();
        let sigma = DensityMatrix::from_populations(&[0.5, 0.0, 0.0, 0.5], vec![2, 2]).unwrap();
        let d = relative_entropy(&rho, &sigma, 1e-12).unwrap();
        assert!((d - std::f64::consts::LN_2).abs() < 1e-14);
    }

    #[test]
    fn disjoint_support_is_infinite() {
        let a = states::basis_state::<f64>(&[2, 2], 0).unwrap();
        let b = states::basis_state::<f64>(&[2, 2], 1).unwrap();
        assert_eq!(relative_entropy(&a, &b, 1e-12).unwrap(), f64::INFINITY);
        // the floored variant stays finite
        let floored = relative_entropy_floored(&a, &b, 1e-12).unwrap();
        assert!((floored + 1e-12f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = states::plus_y::<f64>();
        let b = states::werner::<f64>(0.5).unwrap();
        assert!(matches!(
            relative_entropy(&a, &b, 1e-12),
            Err(RslError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn floor_range_is_enforced() {
        let a = states::plus_y::<f64>();
        assert!(relative_entropy(&a, &a, 0.0).is_err());
        assert!(relative_entropy(&a, &a, 1e-3).is_err());
        assert!(matrix_log_floor(&a, 1e-5).is_err());
    }

    #[test]
    fn log_examples() {
        let id = CMatrix::<f64>::identity(2);
        let l = matrix_log_floor_psd(&id, 1e-12).unwrap();
        assert!(l.matrix().max_abs() < 1e-15);

        let half = DensityMatrix::<f64>::maximally_mixed(vec![2]);
        let l = matrix_log_floor(&half, 1e-12).unwrap();
        let expected = CMatrix::identity(2).scale(-std::f64::consts::LN_2);
        assert!(l.matrix().max_abs_diff(&expected) < 1e-15);

        let eps = 1e-9;
        let p = DensityMatrix::<f64>::from_populations(&[1.0, 0.0], vec![2]).unwrap();
        let l = matrix_log_floor(&p, eps).unwrap();
        let expected = CMatrix::diagonal(&[0.0, eps.ln()]);
        assert!(l.matrix().max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn log_rejects_non_psd() {
        let m = CMatrix::<f64>::diagonal(&[1.2, -0.2]);
        assert!(matrix_log_floor_psd(&m, 1e-12).is_err());
    }
}
