use num_complex::Complex;
use num_traits::Zero;

use super::matrix::CMatrix;
use super::state::DensityMatrix;
use crate::error::{Result, RslError};
use crate::scalar::Real;

/// Completely dephases ρ in the computational basis.
pub fn dephase<T: Real>(rho: &DensityMatrix<T>) -> DensityMatrix<T> {
    let m = rho.matrix();
    let out = CMatrix::from_fn(m.dim(), |i, j| if i == j { m[(i, i)] } else { Complex::zero() });
    DensityMatrix::from_trusted(out, rho.local_dims().to_vec())
}

/// `A ⊗ B`, with the subsystem factorisations concatenated.
pub fn tensor<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> DensityMatrix<T> {
    let dims = a.local_dims().iter().chain(b.local_dims()).copied().collect();
    DensityMatrix::from_trusted(a.matrix().kron(b.matrix()), dims)
}

/// Reduced state of subsystem `keep`, tracing out every other factor.
pub fn partial_trace<T: Real>(rho: &DensityMatrix<T>, keep: usize) -> Result<DensityMatrix<T>> {
    let dims = rho.local_dims();
    if dims.len() < 2 || keep >= dims.len() {
        return Err(RslError::SubsystemOutOfRange {
            index: keep,
            count: dims.len(),
        });
    }
    let d_keep = dims[keep];
    // strides in the row-major mixed-radix index
    let inner: usize = dims[keep + 1..].iter().product();
    let outer: usize = dims[..keep].iter().product();
    let m = rho.matrix();
    let mut out = CMatrix::zeros(d_keep);
    for a in 0..d_keep {
        for b in 0..d_keep {
            let mut acc = Complex::zero();
            for o in 0..outer {
                for i in 0..inner {
                    let r = (o * d_keep + a) * inner + i;
                    let c = (o * d_keep + b) * inner + i;
                    acc = acc + m[(r, c)];
                }
            }
            out[(a, b)] = acc;
        }
    }
    Ok(DensityMatrix::from_trusted(out, vec![d_keep]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{entropy::von_neumann_entropy, random, states};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dephase_examples() {
        let diag = DensityMatrix::<f64>::from_populations(&[0.2, 0.8], vec![2]).unwrap();
        assert_eq!(dephase(&diag), diag);

        let bell = states::bell_phi_plus::<f64>();
        let d = dephase(&bell);
        let expected = CMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5]);
        assert!(d.matrix().max_abs_diff(&expected) < 1e-15);
        assert_eq!(dephase(&d), d);
    }

    #[test]
    fn dephase_preserves_trace_and_never_raises_purity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let rho = random::random_state::<f64, _>(&mut rng, &[2, 2]);
            let d = dephase(&rho);
            assert!((d.matrix().trace().re - rho.matrix().trace().re).abs() < 1e-15);
            assert!(d.purity() <= rho.purity() + 1e-15);
        }
    }

    #[test]
    fn tensor_examples() {
        let z = states::basis_state::<f64>(&[2], 0).unwrap();
        let zz = tensor(&z, &z);
        assert_eq!(zz.local_dims(), &[2, 2]);
        assert!(zz
            .matrix()
            .max_abs_diff(states::basis_state::<f64>(&[2, 2], 0).unwrap().matrix())
            < 1e-16);

        let mixed = DensityMatrix::<f64>::maximally_mixed(vec![2]);
        let mm = tensor(&mixed, &mixed);
        assert!(mm.matrix().max_abs_diff(&CMatrix::identity(4).scale(0.25)) < 1e-16);
    }

    #[test]
    fn entropy_is_additive_on_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = random::random_state::<f64, _>(&mut rng, &[2]);
            let b = random::random_state::<f64, _>(&mut rng, &[3]);
            let lhs = von_neumann_entropy(&tensor(&a, &b));
            let rhs = von_neumann_entropy(&a) + von_neumann_entropy(&b);
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random::random_state::<f64, _>(&mut rng, &[2]);
        let b = random::random_state::<f64, _>(&mut rng, &[3]);
        let ab = tensor(&a, &b);
        assert!(partial_trace(&ab, 0).unwrap().distance(&a) < 1e-15);
        assert!(partial_trace(&ab, 1).unwrap().distance(&b) < 1e-15);

        let bell = states::bell_phi_plus::<f64>();
        let red = partial_trace(&bell, 0).unwrap();
        assert!(red.distance(&DensityMatrix::maximally_mixed(vec![2])) < 1e-15);

        let three = random::random_state::<f64, _>(&mut rng, &[2, 3, 2]);
        for k in 0..3 {
            let r = partial_trace(&three, k).unwrap();
            assert!((r.matrix().trace().re - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn partial_trace_index_errors() {
        let bell = states::bell_phi_plus::<f64>();
        assert!(matches!(
            partial_trace(&bell, 2),
            Err(RslError::SubsystemOutOfRange { index: 2, count: 2 })
        ));
        let q = states::plus_y::<f64>();
        assert!(partial_trace(&q, 0).is_err());
    }
}
