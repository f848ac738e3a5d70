//! Random states for property tests and randomized sweeps.

use num_complex::Complex;
use rand::Rng;

use super::matrix::CMatrix;
use super::state::DensityMatrix;
use crate::scalar::Real;

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    // Box–Muller
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    T::lit((-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos())
}

/// Haar-random unit vector in `C^dim`.
pub fn random_pure_vector<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex<T>> {
    let v: Vec<Complex<T>> = (0..dim)
        .map(|_| Complex::new(gaussian(rng), gaussian(rng)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Full-rank random state `G G† / Tr[G G†]` from a Ginibre matrix.
pub fn random_state<T: Real, R: Rng + ?Sized>(rng: &mut R, local_dims: &[usize]) -> DensityMatrix<T> {
    let d: usize = local_dims.iter().product();
    let g = CMatrix::from_fn(d, |_, _| Complex::new(gaussian(rng), gaussian(rng)));
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    DensityMatrix::from_trusted(w.scale(T::one() / tr), local_dims.to_vec())
}

/// Random state with independent, uniformly drawn Werner parameter.
pub fn random_werner<T: Real, R: Rng + ?Sized>(rng: &mut R, max_p: f64) -> DensityMatrix<T> {
    let p = rng.gen_range(0.0..=max_p);
    super::states::werner(T::lit(p)).expect("p in range")
}
