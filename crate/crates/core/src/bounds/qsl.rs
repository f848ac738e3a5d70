use super::quadrature::{average_abs, Profile};
use super::rsl::richardson;
use super::{BoundOptions, EntropyOrientation, TimeBound, Unbounded, SINGULAR_TOL};
use crate::dynamics::Trajectory;
use crate::error::{Result, RslError};
use crate::qcore::entropy::{log_from_eigen, null_space_weight, SUPPORT_TOL};
use crate::qcore::{relative_entropy, von_neumann_entropy, DensityMatrix};
use crate::scalar::Real;

/// ρ₀ must match σ this closely for a generation bound.
pub const GENERATION_TOL: f64 = 1e-8;
/// ρ_τ must match σ this closely for a strict degradation bound.
pub const DEGRADATION_TOL: f64 = 1e-6;

fn check_dim<T: Real>(traj: &Trajectory<T>, sigma: &DensityMatrix<T>) -> Result<()> {
    if traj.dim() != sigma.dim() {
        return Err(RslError::DimensionMismatch {
            expected: traj.dim(),
            found: sigma.dim(),
        });
    }
    Ok(())
}

/// `T(a, b) = |S(a‖b) − ΔS| / ⟨|Tr[L_t log b]|⟩_t`, or `None` if `S(a‖b)`
/// is infinite.
fn directional<T: Real>(
    traj: &Trajectory<T>,
    profile: &Profile<T>,
    a: &DensityMatrix<T>,
    b: &DensityMatrix<T>,
    delta_s: T,
    opts: &BoundOptions<T>,
) -> Option<TimeBound<T>> {
    let eig = b.eigen();
    if null_space_weight(a.matrix(), &eig, opts.floor) > T::tol(SUPPORT_TOL) {
        return None;
    }
    let s_a = von_neumann_entropy(a);
    let at = |floor: T| {
        let log_b = log_from_eigen(&eig, floor);
        let num = -s_a - log_b.trace_with(a.matrix()) - delta_s;
        let avg = average_abs(traj, profile, &log_b, T::one(), T::zero(), opts.quadrature);
        TimeBound::from_ratio(num, avg)
    };
    if opts.epsilon > T::zero() && eig.min_value() <= T::lit(SINGULAR_TOL) {
        let half = T::lit(0.5);
        let e = opts.epsilon;
        let vals = [at(e), at(e * half), at(e * half * half)];
        if let [Some(x), Some(y), Some(z)] = vals.map(|v| v.finite()) {
            return Some(TimeBound::Finite(richardson([x, y, z]).max(T::zero())));
        }
    }
    Some(at(opts.floor))
}

/// `max{T(ρ₀, ρ_τ), T(ρ_τ, ρ₀)}`, where the reverse direction uses the
/// entropy change selected by [`EntropyOrientation`]. A direction whose
/// relative entropy is infinite is skipped; if both are, the bound is
/// infinite.
pub fn bound_qsl<T: Real>(traj: &Trajectory<T>, opts: &BoundOptions<T>) -> Result<TimeBound<T>> {
    opts.validate()?;
    let r0 = traj.initial_state();
    let r1 = traj.final_state();
    if r0.distance(r1) <= T::epsilon() * T::lit(16.0) {
        return Ok(TimeBound::Finite(T::zero()));
    }
    let profile = Profile::new(traj, opts.floor);
    let ds = profile.delta_s();
    let fwd = directional(traj, &profile, r0, r1, ds, opts);
    let rev_ds = match opts.orientation {
        EntropyOrientation::Flipped => -ds,
        EntropyOrientation::Literal => ds,
    };
    let rev = directional(traj, &profile, r1, r0, rev_ds, opts);
    Ok(match (fwd, rev) {
        (None, None) => TimeBound::Infinite(Unbounded::SupportViolation),
        (Some(b), None) | (None, Some(b)) => b,
        (Some(a), Some(b)) => {
            if a.value() >= b.value() {
                a
            } else {
                b
            }
        }
    })
}

/// Generation bound `|S(ρ_τ‖σ) + ΔS| / ⟨|Tr[L_t log σ]|⟩_t` for a
/// trajectory starting at the free state σ. The relative entropy uses the
/// floored logarithm, so pure σ is admissible.
pub fn bound_tg<T: Real>(
    traj: &Trajectory<T>,
    sigma: &DensityMatrix<T>,
    opts: &BoundOptions<T>,
) -> Result<TimeBound<T>> {
    opts.validate()?;
    check_dim(traj, sigma)?;
    let d = traj.initial_state().distance(sigma);
    if d > T::tol(GENERATION_TOL) {
        return Err(RslError::Precondition(format!(
            "generation must start at the free state (distance {:.3e})",
            d.to_f64_lossy()
        )));
    }
    let profile = Profile::new(traj, opts.floor);
    let log_sigma = log_from_eigen(&sigma.eigen(), opts.floor);
    let r1 = traj.final_state();
    let rel = -von_neumann_entropy(r1) - log_sigma.trace_with(r1.matrix());
    let avg = average_abs(traj, &profile, &log_sigma, T::one(), T::zero(), opts.quadrature);
    Ok(TimeBound::from_ratio(rel + profile.delta_s(), avg))
}

/// Degradation bound `|S(ρ₀‖σ) − ΔS| / ⟨|Tr[L_t log σ]|⟩_t` for a
/// trajectory ending at the free state σ.
pub fn bound_td<T: Real>(
    traj: &Trajectory<T>,
    sigma: &DensityMatrix<T>,
    opts: &BoundOptions<T>,
) -> Result<TimeBound<T>> {
    check_dim(traj, sigma)?;
    let d = traj.final_state().distance(sigma);
    if d > T::tol(DEGRADATION_TOL) {
        return Err(RslError::Precondition(format!(
            "degradation must end at the free state (distance {:.3e}); \
             use bound_td_near_free for a nearby final state",
            d.to_f64_lossy()
        )));
    }
    bound_td_near_free(traj, sigma, opts)
}

/// [`bound_td`] without the endpoint check, for trajectories that only
/// approach σ. The result may exceed τ by up to `S(ρ_τ‖σ)` over the
/// averaged rate.
pub fn bound_td_near_free<T: Real>(
    traj: &Trajectory<T>,
    sigma: &DensityMatrix<T>,
    opts: &BoundOptions<T>,
) -> Result<TimeBound<T>> {
    opts.validate()?;
    check_dim(traj, sigma)?;
    let rel = relative_entropy(traj.initial_state(), sigma, opts.floor)?;
    if !rel.is_finite() {
        return Ok(TimeBound::Infinite(Unbounded::SupportViolation));
    }
    let profile = Profile::new(traj, opts.floor);
    let log_sigma = log_from_eigen(&sigma.eigen(), opts.floor);
    let avg = average_abs(traj, &profile, &log_sigma, T::one(), T::zero(), opts.quadrature);
    Ok(TimeBound::from_ratio(rel - profile.delta_s(), avg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{ChannelSpec, ThermalParams};
    use crate::qcore::{dephase, states, HermitianOperator};

    fn opts() -> BoundOptions<f64> {
        BoundOptions::default()
    }

    #[test]
    fn qsl_tight_for_dephasing_and_depolarising() {
        for ch in [
            ChannelSpec::<f64>::Dephasing { gamma: 1.0 },
            ChannelSpec::Depolarising { gamma: 1.0 },
        ] {
            let tau = 1.0;
            let traj = Trajectory::generate(&ch, &states::werner(0.5).unwrap(), tau, 1000).unwrap();
            let t = bound_qsl(&traj, &opts()).unwrap().value();
            assert!((t - tau).abs() <= 1e-3 * tau && t <= tau * (1.0 + 1e-6), "{t}");
        }
    }

    #[test]
    fn qsl_strict_for_noncommuting_thermal_start() {
        let ch = ChannelSpec::Thermal(ThermalParams::new(2.0, 4.0, 0.2));
        let traj = Trajectory::generate(&ch, &states::plus_y(), 0.5, 1000).unwrap();
        let t = bound_qsl(&traj, &opts()).unwrap().value();
        assert!(t < 0.5 * (1.0 - 1e-4));
    }

    #[test]
    fn literal_orientation_can_exceed_tau() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let ch = ChannelSpec::Thermal(ThermalParams::new(1.0, 1.0, 0.5));
        let literal = BoundOptions {
            orientation: EntropyOrientation::Literal,
            ..opts()
        };
        let tau = 3.0;
        let mut overshoots = 0;
        for _ in 0..20 {
            let rho = crate::qcore::random::random_state(&mut rng, &[2]);
            let traj = Trajectory::generate(&ch, &rho, tau, 500).unwrap();
            let t = bound_qsl(&traj, &opts()).unwrap().value();
            assert!(t <= tau * (1.0 + 1e-6) + 1e-8, "{t}");
            if bound_qsl(&traj, &literal).unwrap().value() > tau * (1.0 + 1e-6) {
                overshoots += 1;
            }
        }
        assert!(overshoots > 0);
    }

    #[test]
    fn qsl_of_stationary_trajectory_is_zero() {
        let ch = ChannelSpec::Thermal(ThermalParams::new(2.0, 4.0, 0.2));
        let g = states::gibbs(4.0, 0.2);
        let traj = Trajectory::generate(&ch, &g, 1.0, 200).unwrap();
        assert!(bound_qsl(&traj, &opts()).unwrap().value() < 1e-9);
    }

    #[test]
    fn qsl_both_directions_unsupported() {
        // two orthogonal pure states joined by a unitary rotation
        let h = HermitianOperator::new(states::pauli_x::<f64>()).unwrap();
        let z = states::basis_state(&[2], 0).unwrap();
        let traj = Trajectory::unitary(&h, &z, std::f64::consts::FRAC_PI_2, 100).unwrap();
        assert_eq!(
            bound_qsl(&traj, &opts()).unwrap(),
            TimeBound::Infinite(Unbounded::SupportViolation)
        );
    }

    #[test]
    fn generation_examples() {
        // trivial trajectory
        let g = states::gibbs(4.0, 0.2);
        let ch = ChannelSpec::Thermal(ThermalParams::new(2.0, 4.0, 0.2));
        let traj = Trajectory::generate(&ch, &g, 1.0, 200).unwrap();
        assert_eq!(bound_tg(&traj, &g, &opts()).unwrap(), TimeBound::Finite(0.0));

        // unitary generation of entanglement from |00⟩
        let h = HermitianOperator::new(states::pauli_x::<f64>().kron(&states::pauli_x())).unwrap();
        let s = states::basis_state(&[2, 2], 0).unwrap();
        let tau = std::f64::consts::FRAC_PI_4;
        let traj = Trajectory::unitary(&h, &s, tau, 1000).unwrap();
        let t = bound_tg(&traj, &s, &opts()).unwrap().value();
        assert!(t <= tau * (1.0 + 1e-6) + 1e-8);

        // reversed dephasing: from the dephased Bell state back to Bell
        let deph = ChannelSpec::Dephasing { gamma: 1.0 };
        let fwd = Trajectory::generate(&deph, &states::bell_phi_plus(), 25.0, 2000).unwrap();
        let rev = fwd.reversed();
        let sigma = dephase(&states::bell_phi_plus());
        let t = bound_tg(&rev, &sigma, &opts()).unwrap().value();
        assert!(t <= 25.0 * (1.0 + 1e-6) + 1e-8);

        assert!(matches!(
            bound_tg(&fwd, &sigma, &opts()),
            Err(RslError::Precondition(_))
        ));
    }

    #[test]
    fn degradation_examples() {
        let ch = ChannelSpec::Depolarising { gamma: 1.0 };
        let traj = Trajectory::generate(&ch, &states::werner(0.1).unwrap(), 1.5, 1000).unwrap();
        let sigma = traj.final_state().clone();
        let t = bound_td(&traj, &sigma, &opts()).unwrap().value();
        assert!(t <= 1.5 * (1.0 + 1e-6) + 1e-8 && t > 0.0);

        // no resource to degrade
        let g = states::gibbs(4.0, 0.2);
        let th = ChannelSpec::Thermal(ThermalParams::new(2.0, 4.0, 0.2));
        let still = Trajectory::generate(&th, &g, 1.0, 200).unwrap();
        assert_eq!(bound_td(&still, &g, &opts()).unwrap(), TimeBound::Finite(0.0));

        // support violation
        let pure = states::basis_state::<f64>(&[2, 2], 1).unwrap();
        let deph = ChannelSpec::Dephasing { gamma: 1.0 };
        let tr = Trajectory::generate(&deph, &pure, 1.0, 10).unwrap();
        let sigma = states::basis_state(&[2, 2], 0).unwrap();
        assert_eq!(
            bound_td_near_free(&tr, &sigma, &opts()).unwrap(),
            TimeBound::Infinite(Unbounded::SupportViolation)
        );
        assert!(bound_td(&tr, &sigma, &opts()).is_err());
    }

    #[test]
    fn thermal_degradation_to_gibbs() {
        let th = ChannelSpec::Thermal(ThermalParams::new(2.0, 4.0, 0.2));
        let g = states::gibbs(4.0, 0.2);
        // long enough for ρ_τ to reach the Gibbs state within 1e-6
        let tau = 10.0;
        let traj = Trajectory::generate(&th, &states::plus_y(), tau, 1000).unwrap();
        let t = bound_td(&traj, &g, &opts()).unwrap().value();
        assert!(t <= tau * (1.0 + 1e-6) + 1e-8, "{t}");

        // at τ = 5/γ the final state is only near the Gibbs state and the
        // excess over τ equals S(ρ_τ‖G) over the averaged rate
        let tau = 2.5;
        let traj = Trajectory::generate(&th, &states::plus_y(), tau, 1000).unwrap();
        assert!(bound_td(&traj, &g, &opts()).is_err());
        let t = bound_td_near_free(&traj, &g, &opts()).unwrap().value();
        let profile = Profile::new(&traj, 1e-12);
        let log_g = log_from_eigen(&g.eigen(), 1e-12);
        let avg = average_abs(&traj, &profile, &log_g, 1.0, 0.0, Default::default());
        let excess = relative_entropy(traj.final_state(), &g, 1e-12).unwrap() / avg;
        assert!(((t - tau) - excess).abs() < 1e-9 * tau, "{t} {excess}");
    }
}
