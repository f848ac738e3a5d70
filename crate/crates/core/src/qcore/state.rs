use num_complex::Complex;

use super::eigen::HermitianEigen;
use super::matrix::CMatrix;
use crate::error::{Result, RslError};
use crate::scalar::Real;

/// Maximum entry-wise Hermiticity defect accepted for states and operators.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Maximum `|Tr ρ − 1|` accepted for states.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted for states.
pub const PSD_TOL: f64 = 1e-10;

/// A density matrix: Hermitian, unit trace, positive semidefinite.
///
/// `local_dims` records the tensor factorisation of the Hilbert space; its
/// product always equals `dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real = f64> {
    matrix: CMatrix<T>,
    local_dims: Vec<usize>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates `matrix` as a state on a space with the given factorisation.
    pub fn new(matrix: CMatrix<T>, local_dims: Vec<usize>) -> Result<Self> {
        check_local_dims(matrix.dim(), &local_dims)?;
        if matrix.dim() == 0 {
            return Err(RslError::InvalidState("zero-dimensional state".into()));
        }
        if !matrix.is_finite() {
            return Err(RslError::InvalidState("non-finite entries".into()));
        }
        let defect = matrix.hermiticity_defect();
        if defect > T::tol(HERMITIAN_TOL) {
            return Err(RslError::NotHermitian {
                defect: defect.to_f64_lossy(),
            });
        }
        let tr = matrix.trace().re;
        if (tr - T::one()).abs() > T::tol(TRACE_TOL) {
            return Err(RslError::InvalidState(format!(
                "trace {} differs from 1",
                tr.to_f64_lossy()
            )));
        }
        let matrix = matrix.hermitian_part();
        let min = HermitianEigen::new(&matrix).min_value();
        if min < -T::tol(PSD_TOL) {
            return Err(RslError::InvalidState(format!(
                "negative eigenvalue {:.3e}",
                min.to_f64_lossy()
            )));
        }
        Ok(Self { matrix, local_dims })
    }

    /// A state on a single (unfactorised) system.
    pub fn from_matrix(matrix: CMatrix<T>) -> Result<Self> {
        let d = matrix.dim();
        Self::new(matrix, vec![d])
    }

    /// Builds without validation, symmetrising the input. Callers guarantee
    /// the state invariants up to their own tolerances.
    pub(crate) fn from_trusted(matrix: CMatrix<T>, local_dims: Vec<usize>) -> Self {
        debug_assert_eq!(matrix.dim(), local_dims.iter().product::<usize>());
        Self {
            matrix: matrix.hermitian_part(),
            local_dims,
        }
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalised) vector.
    pub fn pure(psi: &[Complex<T>], local_dims: Vec<usize>) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() || !norm.is_finite() {
            return Err(RslError::InvalidState("zero state vector".into()));
        }
        let v: Vec<Complex<T>> = psi.iter().map(|z| z / norm).collect();
        check_local_dims(v.len(), &local_dims)?;
        Ok(Self::from_trusted(CMatrix::outer(&v, &v), local_dims))
    }

    /// Diagonal state with the given populations.
    pub fn from_populations(p: &[T], local_dims: Vec<usize>) -> Result<Self> {
        Self::new(CMatrix::diagonal(p), local_dims)
    }

    /// `I / dim`.
    pub fn maximally_mixed(local_dims: Vec<usize>) -> Self {
        let d: usize = local_dims.iter().product();
        let m = CMatrix::identity(d).scale(T::one() / T::from_usize_lossy(d));
        Self::from_trusted(m, local_dims)
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    /// Same matrix with a different tensor factorisation.
    pub fn with_local_dims(self, local_dims: Vec<usize>) -> Result<Self> {
        check_local_dims(self.dim(), &local_dims)?;
        Ok(Self {
            matrix: self.matrix,
            local_dims,
        })
    }

    pub fn eigen(&self) -> HermitianEigen<T> {
        HermitianEigen::new(&self.matrix)
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> T {
        self.matrix.trace_product(&self.matrix).re
    }

    pub fn distance(&self, other: &Self) -> T {
        self.matrix.max_abs_diff(&other.matrix)
    }

    /// Convex combination `(1 − w)·self + w·other`.
    pub fn mix(&self, other: &Self, w: T) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(RslError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if !(T::zero()..=T::one()).contains(&w) {
            return Err(RslError::InvalidArgument("mixing weight outside [0, 1]".into()));
        }
        let m = &self.matrix.scale(T::one() - w) + &other.matrix.scale(w);
        Ok(Self::from_trusted(m, self.local_dims.clone()))
    }
}

fn check_local_dims(dim: usize, local_dims: &[usize]) -> Result<()> {
    let prod: usize = local_dims.iter().product();
    if local_dims.is_empty() || local_dims.contains(&0) || prod != dim {
        return Err(RslError::DimensionMismatch {
            expected: dim,
            found: prod,
        });
    }
    Ok(())
}

/// A Hermitian matrix: Hamiltonians, matrix logarithms, Liouvillian outputs.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator<T: Real = f64> {
    matrix: CMatrix<T>,
}

impl<T: Real> HermitianOperator<T> {
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        let scale = T::one().max(matrix.max_abs());
        if !matrix.is_finite() || defect > T::tol(HERMITIAN_TOL) * scale {
            return Err(RslError::NotHermitian {
                defect: defect.to_f64_lossy(),
            });
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    pub(crate) fn from_trusted(matrix: CMatrix<T>) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(dim),
        }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    /// `Tr[self · other]`, real for Hermitian factors.
    pub fn trace_with(&self, other: &CMatrix<T>) -> T {
        self.matrix.trace_product(other).re
    }

    /// `exp(self)` by spectral decomposition.
    pub fn exp(&self) -> CMatrix<T> {
        HermitianEigen::new(&self.matrix).map_values(|l| l.exp())
    }

    /// `exp(−i·t·self)`.
    pub fn unitary(&self, t: T) -> CMatrix<T> {
        HermitianEigen::new(&self.matrix)
            .map_values_complex(|l| Complex::new((l * t).cos(), -(l * t).sin()))
    }
}
