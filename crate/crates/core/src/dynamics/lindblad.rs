use num_complex::Complex;

use super::trajectory::{uniform_grid, Trajectory, TrajectorySource};
use super::{ChannelSpec, DissipatorConvention, ThermalParams};
use crate::error::{Result, RslError};
use crate::qcore::{CMatrix, DensityMatrix, HermitianEigen, HermitianOperator};
use crate::scalar::Real;

/// RK4 substeps per grid interval.
pub const DEFAULT_SUBSTEPS: usize = 10;
/// Fewest grid intervals accepted by [`integrate_lindblad`].
pub const MIN_STEPS: usize = 100;

const TRACE_DRIFT_TOL: f64 = 1e-9;
const NEGATIVITY_TOL: f64 = 1e-8;

fn ladder<T: Real>() -> (CMatrix<T>, CMatrix<T>) {
    let one = Complex::new(T::one(), T::zero());
    let mut up = CMatrix::zeros(2);
    up[(0, 1)] = one;
    let mut down = CMatrix::zeros(2);
    down[(1, 0)] = one;
    (up, down)
}

/// Right-hand side `−i[H₀, ρ] + Σ_± Γ_±(2σ_± ρ σ_±† − {σ_±†σ_±, ρ})`.
pub fn thermal_rhs<T: Real>(params: &ThermalParams<T>, rho: &CMatrix<T>) -> CMatrix<T> {
    let h = params.hamiltonian();
    let mut out = h
        .matrix()
        .commutator(rho)
        .scale_complex(Complex::new(T::zero(), -T::one()));
    let (gain, loss) = params.rates();
    let (up, down) = ladder::<T>();
    let sign = match params.dissipator {
        DissipatorConvention::TracePreserving => -T::one(),
        DissipatorConvention::AsWritten => T::one(),
    };
    for (rate, op) in [(gain, &up), (loss, &down)] {
        let adj = op.adjoint();
        let jump = op.matmul(rho).matmul(&adj).scale(T::lit(2.0));
        let anti = adj.matmul(op).anticommutator(rho).scale(sign);
        out += &(&jump + &anti).scale(rate);
    }
    out
}

fn rk4_step<T: Real>(params: &ThermalParams<T>, rho: &CMatrix<T>, dt: T) -> CMatrix<T> {
    let half = dt * T::lit(0.5);
    let k1 = thermal_rhs(params, rho);
    let k2 = thermal_rhs(params, &(rho + &k1.scale(half)));
    let k3 = thermal_rhs(params, &(rho + &k2.scale(half)));
    let k4 = thermal_rhs(params, &(rho + &k3.scale(dt)));
    let incr = &(&k1 + &k4) + &(&k2 + &k3).scale(T::lit(2.0));
    (rho + &incr.scale(dt / T::lit(6.0))).hermitian_part()
}

/// States at the `intervals + 1` uniform grid points of `[0, tau]`, checking
/// the state invariants at every grid point.
pub(crate) fn propagate<T: Real>(
    params: &ThermalParams<T>,
    rho0: &CMatrix<T>,
    tau: T,
    intervals: usize,
    substeps: usize,
) -> Result<Vec<CMatrix<T>>> {
    let dt = tau / T::from_usize_lossy(intervals * substeps);
    let mut path = Vec::with_capacity(intervals + 1);
    path.push(rho0.clone());
    let mut rho = rho0.clone();
    for i in 1..=intervals {
        for _ in 0..substeps {
            rho = rk4_step(params, &rho, dt);
        }
        let time = (tau * T::from_usize_lossy(i) / T::from_usize_lossy(intervals)).to_f64_lossy();
        let drift = (rho.trace().re - T::one()).abs();
        if !(drift <= T::tol(TRACE_DRIFT_TOL)) {
            return Err(RslError::IntegrationFailure {
                time,
                reason: format!("trace drift {:.3e} exceeds 1e-9", drift.to_f64_lossy()),
            });
        }
        let min = HermitianEigen::new(&rho).min_value();
        if min < -T::tol(NEGATIVITY_TOL) {
            return Err(RslError::IntegrationFailure {
                time,
                reason: format!("eigenvalue {:.3e} below -1e-8", min.to_f64_lossy()),
            });
        }
        path.push(rho.clone());
    }
    Ok(path)
}

/// Fixed-step RK4 trajectory of the thermal channel with `steps` grid
/// intervals and [`DEFAULT_SUBSTEPS`] substeps each.
pub fn integrate_lindblad<T: Real>(
    channel: &ChannelSpec<T>,
    rho0: &DensityMatrix<T>,
    tau: T,
    steps: usize,
) -> Result<Trajectory<T>> {
    integrate_lindblad_with(channel, rho0, tau, steps, DEFAULT_SUBSTEPS)
}

pub fn integrate_lindblad_with<T: Real>(
    channel: &ChannelSpec<T>,
    rho0: &DensityMatrix<T>,
    tau: T,
    steps: usize,
    substeps: usize,
) -> Result<Trajectory<T>> {
    if steps < MIN_STEPS {
        return Err(RslError::InvalidArgument(format!(
            "at least {MIN_STEPS} integration steps required, got {steps}"
        )));
    }
    thermal_trajectory(channel, rho0, tau, steps, substeps)
}

pub(crate) fn thermal_trajectory<T: Real>(
    channel: &ChannelSpec<T>,
    rho0: &DensityMatrix<T>,
    tau: T,
    intervals: usize,
    substeps: usize,
) -> Result<Trajectory<T>> {
    let ChannelSpec::Thermal(params) = channel else {
        return Err(RslError::InvalidChannel(format!(
            "Lindblad integration needs the thermal channel, got {}",
            channel.name()
        )));
    };
    super::channel::check_inputs(channel, rho0, tau)?;
    if !(tau > T::zero()) || intervals == 0 || substeps == 0 {
        return Err(RslError::InvalidArgument(
            "duration, steps and substeps must be positive".into(),
        ));
    }
    let path = propagate(params, rho0.matrix(), tau, intervals, substeps)?;
    let dims = rho0.local_dims().to_vec();
    let derivatives = path
        .iter()
        .map(|m| HermitianOperator::from_trusted(thermal_rhs(params, m)))
        .collect();
    let mut states: Vec<DensityMatrix<T>> = Vec::with_capacity(path.len());
    states.push(rho0.clone());
    states.extend(path.into_iter().skip(1).map(|m| DensityMatrix::from_trusted(m, dims.clone())));
    Ok(Trajectory::from_raw(
        TrajectorySource::Channel(channel.clone()),
        uniform_grid(tau, intervals + 1),
        states,
        derivatives,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{relative_entropy, states};

    fn fig2() -> ChannelSpec<f64> {
        ChannelSpec::Thermal(ThermalParams::new(2.0, 4.0, 0.2))
    }

    #[test]
    fn gibbs_is_a_fixed_point() {
        let p = ThermalParams::new(2.0, 4.0, 0.2);
        assert!(thermal_rhs(&p, p.gibbs().matrix()).max_abs() < 1e-15);
        let traj = integrate_lindblad(&fig2(), &p.gibbs(), 3.0, 300).unwrap();
        assert!(traj.final_state().distance(&p.gibbs()) <= 1e-8);
    }

    #[test]
    fn relative_entropy_to_gibbs_decreases() {
        let ch = fig2();
        let g = states::gibbs(4.0, 0.2);
        let traj = integrate_lindblad(&ch, &states::plus_y(), 1.0, 200).unwrap();
        let d: Vec<f64> = traj
            .states()
            .iter()
            .map(|r| relative_entropy(r, &g, 1e-12).unwrap())
            .collect();
        assert!(d.windows(2).all(|w| w[1] < w[0]));
        for r in traj.states() {
            assert!((r.matrix().trace().re - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn step_halving_converges() {
        let ch = fig2();
        let a = integrate_lindblad_with(&ch, &states::plus_y(), 1.0, 1000, 10).unwrap();
        let b = integrate_lindblad_with(&ch, &states::plus_y(), 1.0, 1000, 20).unwrap();
        assert!(a.final_state().distance(b.final_state()) <= 1e-8);
    }

    #[test]
    fn literal_dissipator_breaks_trace() {
        let mut p = ThermalParams::new(2.0, 4.0, 0.2);
        p.dissipator = DissipatorConvention::AsWritten;
        let err = integrate_lindblad(&ChannelSpec::Thermal(p), &states::plus_y(), 1.0, 100).unwrap_err();
        assert!(matches!(err, RslError::IntegrationFailure { .. }));
    }

    #[test]
    fn too_few_steps_rejected() {
        assert!(integrate_lindblad(&fig2(), &states::plus_y(), 1.0, 99).is_err());
        let deph = ChannelSpec::Dephasing { gamma: 1.0 };
        assert!(integrate_lindblad(&deph, &states::plus_y(), 1.0, 100).is_err());
    }
}
