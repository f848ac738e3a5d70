use num_complex::Complex;

use super::lindblad::{propagate, thermal_rhs, DEFAULT_SUBSTEPS};
use super::{identity_over_dim, ChannelSpec};
use crate::error::{Result, RslError};
use crate::qcore::entropy::{check_floor, log_from_eigen};
use crate::qcore::{CMatrix, DensityMatrix, HermitianOperator};
use crate::scalar::Real;

/// Largest RK4 substep used when `state_at` integrates the thermal channel.
const THERMAL_MAX_DT: f64 = 1e-4;

pub(crate) fn check_inputs<T: Real>(channel: &ChannelSpec<T>, rho0: &DensityMatrix<T>, t: T) -> Result<()> {
    channel.validate()?;
    if !(t >= T::zero() && t.is_finite()) {
        return Err(RslError::InvalidArgument(format!(
            "time must be finite and non-negative, got {}",
            t.to_f64_lossy()
        )));
    }
    if channel.is_thermal() && rho0.dim() != 2 {
        return Err(RslError::DimensionMismatch {
            expected: 2,
            found: rho0.dim(),
        });
    }
    Ok(())
}

/// Closed-form state of the analytic channels; the thermal channel is
/// integrated from `ρ₀`.
pub fn state_at<T: Real>(channel: &ChannelSpec<T>, rho0: &DensityMatrix<T>, t: T) -> Result<DensityMatrix<T>> {
    check_inputs(channel, rho0, t)?;
    if t == T::zero() {
        return Ok(rho0.clone());
    }
    state_unchecked(channel, rho0, t)
}

pub(crate) fn state_unchecked<T: Real>(
    channel: &ChannelSpec<T>,
    rho0: &DensityMatrix<T>,
    t: T,
) -> Result<DensityMatrix<T>> {
    let dims = rho0.local_dims().to_vec();
    let m = rho0.matrix();
    let out = match channel {
        ChannelSpec::Dephasing { .. } | ChannelSpec::DephasingNonMonotonic { .. } => {
            let nu = (-channel.decay_exponent(t)).exp();
            scale_off_diagonal(m, nu)
        }
        ChannelSpec::Depolarising { .. } | ChannelSpec::DepolarisingNonMonotonic { .. } => {
            let e = (-channel.decay_exponent(t)).exp();
            &m.scale(e) + &identity_over_dim::<T>(m.dim()).scale(T::one() - e)
        }
        ChannelSpec::Thermal(params) => {
            let intervals = (t / T::lit(THERMAL_MAX_DT * DEFAULT_SUBSTEPS as f64))
                .ceil()
                .to_usize()
                .unwrap_or(usize::MAX)
                .max(100);
            let path = propagate(params, m, t, intervals, DEFAULT_SUBSTEPS)?;
            path.into_iter().last().expect("non-empty path")
        }
    };
    Ok(DensityMatrix::from_trusted(out, dims))
}

/// `L_t(ρ_t) = dρ_t/dt` at time `t` along the trajectory from `ρ₀`.
pub fn liouvillian_at<T: Real>(
    channel: &ChannelSpec<T>,
    rho0: &DensityMatrix<T>,
    t: T,
) -> Result<HermitianOperator<T>> {
    check_inputs(channel, rho0, t)?;
    match channel {
        ChannelSpec::Thermal(params) => {
            let rho_t = if t == T::zero() {
                rho0.clone()
            } else {
                state_unchecked(channel, rho0, t)?
            };
            Ok(HermitianOperator::from_trusted(thermal_rhs(params, rho_t.matrix())))
        }
        _ => Ok(analytic_derivative(channel, rho0.matrix(), t)),
    }
}

pub(crate) fn analytic_derivative<T: Real>(channel: &ChannelSpec<T>, m: &CMatrix<T>, t: T) -> HermitianOperator<T> {
    let e = (-channel.decay_exponent(t)).exp();
    let rate = channel.decay_rate(t);
    let out = match channel {
        ChannelSpec::Dephasing { .. } | ChannelSpec::DephasingNonMonotonic { .. } => {
            let mut d = scale_off_diagonal(m, -rate * e);
            for i in 0..m.dim() {
                d[(i, i)] = Complex::new(T::zero(), T::zero());
            }
            d
        }
        ChannelSpec::Depolarising { .. } | ChannelSpec::DepolarisingNonMonotonic { .. } => {
            (m - &identity_over_dim::<T>(m.dim())).scale(-rate * e)
        }
        ChannelSpec::Thermal(_) => unreachable!("thermal derivative is not analytic"),
    };
    HermitianOperator::from_trusted(out)
}

fn scale_off_diagonal<T: Real>(m: &CMatrix<T>, s: T) -> CMatrix<T> {
    CMatrix::from_fn(m.dim(), |i, j| if i == j { m[(i, i)] } else { m[(i, j)] * s })
}

/// `Ṡ = −Tr[L log ρ]` with `log ρ` floored at `floor`.
pub fn entropy_rate<T: Real>(rho: &DensityMatrix<T>, l: &HermitianOperator<T>, floor: T) -> Result<T> {
    check_floor(floor)?;
    if rho.dim() != l.dim() {
        return Err(RslError::DimensionMismatch {
            expected: rho.dim(),
            found: l.dim(),
        });
    }
    let tr = l.trace();
    if tr.abs() > T::tol(1e-9) {
        return Err(RslError::Precondition(format!(
            "generator output has trace {:.3e}",
            tr.to_f64_lossy()
        )));
    }
    Ok(-log_from_eigen(&rho.eigen(), floor).trace_with(l.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::ThermalParams;
    use crate::qcore::{dephase, states, von_neumann_entropy};

    fn channels() -> Vec<ChannelSpec<f64>> {
        vec![
            ChannelSpec::Dephasing { gamma: 1.0 },
            ChannelSpec::DephasingNonMonotonic { gamma: 0.2, k: 4.0 },
            ChannelSpec::Depolarising { gamma: 1.0 },
            ChannelSpec::DepolarisingNonMonotonic { gamma: 0.2, k: 4.0 },
        ]
    }

    #[test]
    fn time_zero_returns_initial_state() {
        let rho = states::werner(0.3).unwrap();
        for ch in channels() {
            assert_eq!(state_at(&ch, &rho, 0.0).unwrap(), rho);
        }
        let th = ChannelSpec::Thermal(ThermalParams::new(2.0, 4.0, 0.2));
        let q = states::plus_y();
        assert_eq!(state_at(&th, &q, 0.0).unwrap(), q);
    }

    #[test]
    fn depolarising_keeps_werner_family() {
        let (gamma, p0, t) = (1.0f64, 0.4, 0.7);
        let ch = ChannelSpec::Depolarising { gamma };
        let out = state_at(&ch, &states::werner(p0).unwrap(), t).unwrap();
        let pt = 1.0 - (-gamma * t + (1.0 - p0).ln()).exp();
        assert!(out.distance(&states::werner(pt).unwrap()) < 1e-15);
    }

    #[test]
    fn dephasing_long_time_limit() {
        let rho = states::bell_phi_plus();
        let out = state_at(&ChannelSpec::Dephasing { gamma: 1.0 }, &rho, 60.0).unwrap();
        assert!(out.distance(&dephase(&rho)) < 1e-20);
    }

    #[test]
    fn bell_dephasing_derivative_at_zero() {
        let gamma = 1.0f64;
        let ch = ChannelSpec::Dephasing { gamma };
        let rho = states::bell_phi_plus();
        let l = liouvillian_at(&ch, &rho, 0.0).unwrap();
        assert!((l.matrix()[(0, 3)].re + gamma / 2.0).abs() < 1e-15);
        assert!((l.matrix()[(3, 0)].re + gamma / 2.0).abs() < 1e-15);
        let h = 1e-6f64;
        let fd = (state_at(&ch, &rho, h).unwrap().matrix()[(0, 3)].re - 0.5) / h;
        assert!((fd + gamma / 2.0).abs() < 1e-5);
    }

    #[test]
    fn derivatives_are_traceless() {
        let rho = states::werner(0.2).unwrap();
        for ch in channels() {
            for t in [0.0, 0.3, 1.7, 5.0] {
                assert!(liouvillian_at(&ch, &rho, t).unwrap().trace().abs() < 1e-15);
            }
        }
    }

    #[test]
    fn thermal_requires_a_qubit() {
        let th = ChannelSpec::Thermal(ThermalParams::new(2.0, 4.0, 0.2));
        assert!(matches!(
            state_at(&th, &states::werner(0.1).unwrap(), 1.0),
            Err(RslError::DimensionMismatch { .. })
        ));
        assert!(state_at(&ChannelSpec::Dephasing { gamma: 1.0 }, &states::plus_y(), -1.0).is_err());
    }

    #[test]
    fn entropy_rate_examples() {
        // unitary: L = −i[H, ρ]
        let rho = states::werner(0.4).unwrap();
        let h = states::pauli_x::<f64>().kron(&states::pauli_x());
        let comm = h.commutator(rho.matrix()).scale_complex(Complex::new(0.0, -1.0));
        let l = HermitianOperator::new(comm).unwrap();
        assert!(entropy_rate(&rho, &l, 1e-12).unwrap().abs() < 1e-9);

        // finite-difference entropy along a dephasing trajectory
        let ch = ChannelSpec::Dephasing { gamma: 0.7 };
        let (t, h) = (0.8, 1e-5);
        let rt = state_at(&ch, &rho, t).unwrap();
        let rate = entropy_rate(&rt, &liouvillian_at(&ch, &rho, t).unwrap(), 1e-12).unwrap();
        let fd = (von_neumann_entropy(&state_at(&ch, &rho, t + h).unwrap())
            - von_neumann_entropy(&state_at(&ch, &rho, t - h).unwrap()))
            / (2.0 * h);
        assert!((rate - fd).abs() < 1e-5);

        // entropy grows from a pure state
        let bell = states::bell_phi_plus();
        let t = 1e-3;
        let bt = state_at(&ch, &bell, t).unwrap();
        assert!(entropy_rate(&bt, &liouvillian_at(&ch, &bell, t).unwrap(), 1e-12).unwrap() > 0.0);
    }

    #[test]
    fn entropy_rate_rejects_traceful_generator() {
        let rho = states::plus_y::<f64>();
        let l = HermitianOperator::new(CMatrix::identity(2)).unwrap();
        assert!(matches!(entropy_rate(&rho, &l, 1e-12), Err(RslError::Precondition(_))));
    }
}
