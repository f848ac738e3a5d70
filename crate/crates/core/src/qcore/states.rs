//! Named states used throughout the examples.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::CMatrix;
use super::state::{DensityMatrix, HermitianOperator};
use crate::error::{Result, RslError};
use crate::scalar::Real;

/// Computational basis projector `|i⟩⟨i|` on a space with the given factors.
pub fn basis_state<T: Real>(local_dims: &[usize], index: usize) -> Result<DensityMatrix<T>> {
    let d: usize = local_dims.iter().product();
    if index >= d {
        return Err(RslError::InvalidArgument(format!(
            "basis index {index} out of range for dimension {d}"
        )));
    }
    let mut p = vec![T::zero(); d];
    p[index] = T::one();
    Ok(DensityMatrix::from_trusted(CMatrix::diagonal(&p), local_dims.to_vec()))
}

/// `|φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
pub fn phi_plus_vector<T: Real>() -> [Complex<T>; 4] {
    let h = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    [h, Complex::zero(), Complex::zero(), h]
}

pub fn bell_phi_plus<T: Real>() -> DensityMatrix<T> {
    let v = phi_plus_vector::<T>();
    DensityMatrix::from_trusted(CMatrix::outer(&v, &v), vec![2, 2])
}

/// Werner state `p·I/4 + (1 − p)|φ⁺⟩⟨φ⁺|`, `p ∈ [0, 1]`.
pub fn werner<T: Real>(p: T) -> Result<DensityMatrix<T>> {
    if !(T::zero()..=T::one()).contains(&p) {
        return Err(RslError::InvalidArgument(format!(
            "Werner parameter {} outside [0, 1]",
            p.to_f64_lossy()
        )));
    }
    let quarter = p / T::lit(4.0);
    let coh = (T::one() - p) / T::lit(2.0);
    let mut m = CMatrix::diagonal(&[quarter + coh, quarter, quarter, quarter + coh]);
    m[(0, 3)] = Complex::new(coh, T::zero());
    m[(3, 0)] = Complex::new(coh, T::zero());
    Ok(DensityMatrix::from_trusted(m, vec![2, 2]))
}

/// `(I + σ_y)/2`.
pub fn plus_y<T: Real>() -> DensityMatrix<T> {
    let half = T::lit(0.5);
    let m = CMatrix::from_vec(
        2,
        vec![
            Complex::new(half, T::zero()),
            Complex::new(T::zero(), -half),
            Complex::new(T::zero(), half),
            Complex::new(half, T::zero()),
        ],
    )
    .expect("2x2");
    DensityMatrix::from_trusted(m, vec![2])
}

pub fn pauli_x<T: Real>() -> CMatrix<T> {
    CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("2x2")
}

pub fn pauli_y<T: Real>() -> CMatrix<T> {
    let i = Complex::new(T::zero(), T::one());
    CMatrix::from_vec(2, vec![Complex::zero(), -i, i, Complex::zero()]).expect("2x2")
}

pub fn pauli_z<T: Real>() -> CMatrix<T> {
    CMatrix::diagonal(&[T::one(), -T::one()])
}

/// `H₀ = ω σ_z`.
pub fn qubit_hamiltonian<T: Real>(omega: T) -> HermitianOperator<T> {
    HermitianOperator::from_trusted(pauli_z::<T>().scale(omega))
}

/// Gibbs state `e^{−βH₀}/Z` of `H₀ = ω σ_z`.
pub fn gibbs<T: Real>(omega: T, beta: T) -> DensityMatrix<T> {
    // populations e^{∓βω}/Z computed as a logistic pair to avoid overflow
    let x = T::lit(2.0) * beta * omega;
    let upper = T::one() / (T::one() + x.exp());
    let lower = T::one() / (T::one() + (-x).exp());
    DensityMatrix::from_trusted(CMatrix::diagonal(&[upper, lower]), vec![2])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn werner_entries() {
        let p = 0.4;
        let w = werner::<f64>(p).unwrap();
        let m = w.matrix();
        assert!((m[(0, 0)].re - (p / 4.0 + (1.0 - p) / 2.0)).abs() < 1e-16);
        assert!((m[(1, 1)].re - p / 4.0).abs() < 1e-16);
        assert!((m[(0, 3)].re - (1.0 - p) / 2.0).abs() < 1e-16);
        assert!(werner::<f64>(1.2).is_err());
        assert!(werner::<f64>(0.0).unwrap().distance(&bell_phi_plus()) < 1e-15);
    }

    #[test]
    fn gibbs_matches_exponential() {
        let (omega, beta) = (4.0, 0.2);
        let h = qubit_hamiltonian::<f64>(omega);
        let e = HermitianOperator::from_trusted(h.matrix().scale(-beta)).exp();
        let z = e.trace().re;
        let expected = e.scale(1.0 / z);
        assert!(gibbs(omega, beta).matrix().max_abs_diff(&expected) < 1e-15);
    }
}
