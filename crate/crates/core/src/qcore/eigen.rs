//! Cyclic Jacobi eigendecomposition for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real symmetric Jacobi rotation.
//! Sweeps stop once the off-diagonal Frobenius mass falls below machine
//! precision relative to the whole matrix.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::CMatrix;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 64;

/// Spectral decomposition `A = V diag(values) V†`, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    /// Eigenvectors stored as columns.
    pub vectors: CMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// Decomposes the Hermitian part `(A + A†)/2` of `a`.
    pub fn new(a: &CMatrix<T>) -> Self {
        jacobi(a)
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn min_value(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max_value(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }

    /// Column `k` as a vector.
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        (0..self.dim()).map(|i| self.vectors[(i, k)]).collect()
    }

    /// `V diag(f(λ)) V†`.
    pub fn map_values(&self, f: impl Fn(T) -> T) -> CMatrix<T> {
        let n = self.dim();
        let fv: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex::zero();
                for k in 0..n {
                    if fv[k] == T::zero() {
                        continue;
                    }
                    acc = acc + self.vectors[(i, k)] * self.vectors[(j, k)].conj() * fv[k];
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)] = Complex::new(out[(i, i)].re, T::zero());
        }
        out
    }

    /// `V diag(f(λ)) V†` for a complex-valued spectral function.
    pub fn map_values_complex(&self, f: impl Fn(T) -> Complex<T>) -> CMatrix<T> {
        let n = self.dim();
        let fv: Vec<Complex<T>> = self.values.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, |i, j| {
            (0..n).fold(Complex::zero(), |acc, k| {
                acc + self.vectors[(i, k)] * fv[k] * self.vectors[(j, k)].conj()
            })
        })
    }

    /// Reassembles `V diag(λ) V†`.
    pub fn reconstruct(&self) -> CMatrix<T> {
        self.map_values(|l| l)
    }
}

fn off_diagonal_mass<T: Real>(m: &CMatrix<T>) -> (T, T) {
    let n = m.dim();
    let mut off = T::zero();
    let mut total = T::zero();
    for i in 0..n {
        for j in 0..n {
            let s = m[(i, j)].norm_sqr();
            total = total + s;
            if i != j {
                off = off + s;
            }
        }
    }
    (off, total)
}

fn jacobi<T: Real>(a: &CMatrix<T>) -> HermitianEigen<T> {
    let n = a.dim();
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let (off, total) = off_diagonal_mass(&m);
        if off == T::zero() || off <= eps * eps * total * T::lit(1e-4) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == T::zero() {
                    continue;
                }
                let phase = apq / r;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (r + r);
                let t = if theta.abs() > T::lit(1e150) {
                    T::one() / (theta + theta)
                } else {
                    let s = if theta < T::zero() { -T::one() } else { T::one() };
                    s / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let phase_c = phase.conj();

                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c - mkq * phase_c * s;
                    m[(k, q)] = mkp * s + mkq * phase_c * c;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = mpk * c - mqk * phase * s;
                    m[(q, k)] = mpk * s + mqk * phase * c;
                }
                m[(p, q)] = Complex::zero();
                m[(q, p)] = Complex::zero();
                m[(p, p)] = Complex::new(app - t * r, T::zero());
                m[(q, q)] = Complex::new(aqq + t * r, T::zero());

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * phase_c * s;
                    v[(k, q)] = vkp * s + vkq * phase_c * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[(i, i)]
            .re
            .partial_cmp(&m[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    HermitianEigen { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn pseudo_random_hermitian(n: usize, seed: u64) -> CMatrix<f64> {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let raw = CMatrix::from_fn(n, |_, _| c(next(), next()));
        raw.hermitian_part()
    }

    #[test]
    fn pauli_y_spectrum() {
        let y = CMatrix::from_vec(2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap();
        let e = HermitianEigen::new(&y);
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
        assert!(e.reconstruct().max_abs_diff(&y) < 1e-15);
    }

    #[test]
    fn residual_and_orthonormality_up_to_dim_16() {
        for (n, seed) in [(1, 1), (2, 2), (3, 3), (4, 4), (8, 5), (16, 6)] {
            let a = pseudo_random_hermitian(n, seed);
            let e = HermitianEigen::new(&a);
            assert!(e.reconstruct().max_abs_diff(&a) < 1e-12, "dim {n}");
            let vtv = e.vectors.adjoint().matmul(&e.vectors);
            assert!(vtv.max_abs_diff(&CMatrix::identity(n)) < 1e-12);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum_is_resolved() {
        let a = CMatrix::<f64>::identity(4).scale(0.25);
        let e = HermitianEigen::new(&a);
        assert!(e.values.iter().all(|&l| (l - 0.25).abs() < 1e-16));
    }

    #[test]
    fn single_precision_is_supported() {
        let a = pseudo_random_hermitian(4, 9);
        let a32 = CMatrix::from_fn(4, |i, j| {
            Complex::new(a[(i, j)].re as f32, a[(i, j)].im as f32)
        });
        let e = HermitianEigen::new(&a32);
        assert!(e.reconstruct().max_abs_diff(&a32) < 1e-5);
    }
}
