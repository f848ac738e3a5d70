use super::quadrature::{average_abs, Profile};
use super::{BoundOptions, Endpoint, TimeBound, Unbounded, RATE_ZERO, SINGULAR_TOL};
use crate::dynamics::Trajectory;
use crate::error::Result;
use crate::qcore::entropy::log_from_eigen;
use crate::qcore::{relative_entropy, DensityMatrix, HermitianEigen, HermitianOperator};
use crate::resources::{is_werner_family, FreeStateOracle};
use crate::scalar::Real;

/// A resource speed limit together with the quantities it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct RslBound<T: Real = f64> {
    pub bound: TimeBound<T>,
    /// Endpoint whose closest free state entered the denominator.
    pub x: Endpoint,
    pub delta_m: T,
    pub delta_s: T,
    /// Almost-free-state perturbation, zero if none was applied.
    pub epsilon_used: T,
}

struct Ends<T: Real> {
    sigma: [DensityMatrix<T>; 2],
    measure: [T; 2],
}

impl<T: Real> Ends<T> {
    fn new(traj: &Trajectory<T>, oracle: &FreeStateOracle<T>, floor: T) -> Result<Self> {
        // every grid state must lie in the oracle's domain
        for rho in traj.states() {
            oracle.closest_free(rho)?;
        }
        let r0 = traj.initial_state();
        let r1 = traj.final_state();
        let s0 = oracle.closest_free(r0)?;
        let s1 = oracle.closest_free(r1)?;
        let m0 = relative_entropy(r0, &s0, floor)?;
        let m1 = relative_entropy(r1, &s1, floor)?;
        Ok(Self {
            sigma: [s0, s1],
            measure: [m0, m1],
        })
    }

    fn sigma(&self, x: Endpoint) -> &DensityMatrix<T> {
        match x {
            Endpoint::Initial => &self.sigma[0],
            Endpoint::Final => &self.sigma[1],
        }
    }

    fn delta_m(&self) -> T {
        self.measure[1] - self.measure[0]
    }
}

fn endpoint_for<T: Real>(delta: T) -> Endpoint {
    if delta <= T::zero() {
        Endpoint::Final
    } else {
        Endpoint::Initial
    }
}

/// `T_M = |ΔM| / ⟨|−Tr[L_t log σ▼_x] − Ṡ(ρ_t)|⟩_t`, with `x = τ` when
/// `ΔM ≤ 0` and `x = 0` otherwise.
pub fn bound_tm<T: Real>(
    traj: &Trajectory<T>,
    oracle: &FreeStateOracle<T>,
    opts: &BoundOptions<T>,
) -> Result<RslBound<T>> {
    opts.validate()?;
    let ends = Ends::new(traj, oracle, opts.floor)?;
    let profile = Profile::new(traj, opts.floor);
    let delta_m = ends.delta_m();
    let delta_s = profile.delta_s();
    if !delta_m.is_finite() {
        return Ok(RslBound {
            bound: TimeBound::Infinite(Unbounded::SupportViolation),
            x: Endpoint::Final,
            delta_m,
            delta_s,
            epsilon_used: T::zero(),
        });
    }
    let x = endpoint_for(delta_m);
    let log_sigma = log_from_eigen(&ends.sigma(x).eigen(), opts.floor);
    let avg = average_abs(traj, &profile, &log_sigma, -T::one(), -T::one(), opts.quadrature);
    Ok(RslBound {
        bound: TimeBound::from_ratio(delta_m, avg),
        x,
        delta_m,
        delta_s,
        epsilon_used: T::zero(),
    })
}

/// Logarithm of the almost-free state: the `|00⟩⟨11|` perturbation for the
/// Werner family when it keeps σ positive, eigenvalue flooring at `eps`
/// otherwise.
fn almost_free_log<T: Real>(sigma: &DensityMatrix<T>, eps: T, floor: T) -> HermitianOperator<T> {
    if is_werner_family(sigma) {
        let mut m = sigma.matrix().clone();
        m[(0, 3)].re = m[(0, 3)].re + eps;
        m[(3, 0)].re = m[(3, 0)].re + eps;
        let eig = HermitianEigen::new(&m);
        if eig.min_value() >= -T::tol(1e-14) {
            return log_from_eigen(&eig, floor);
        }
    }
    log_from_eigen(&sigma.eigen(), eps.max(floor))
}

/// `(T(ε) − 6T(ε/2) + 8T(ε/4))/3`, cancelling the `O(ε)` and `O(ε²)` terms.
pub(crate) fn richardson<T: Real>(values: [T; 3]) -> T {
    (values[0] - T::lit(6.0) * values[1] + T::lit(8.0) * values[2]) / T::lit(3.0)
}

/// `T̃_M = |ΔM + ΔS| / ⟨|Tr[L_t log σ▼_x]|⟩_t`, with `x` chosen by the sign
/// of `ΔM + ΔS`.
///
/// When `σ▼_x` is singular or the averaged rate vanishes and `ε > 0`, both
/// endpoint free states are replaced by almost-free states and the ratio is
/// extrapolated to `ε → 0` from `{ε, ε/2, ε/4}`.
pub fn bound_ttilde<T: Real>(
    traj: &Trajectory<T>,
    oracle: &FreeStateOracle<T>,
    opts: &BoundOptions<T>,
) -> Result<RslBound<T>> {
    opts.validate()?;
    let ends = Ends::new(traj, oracle, opts.floor)?;
    let profile = Profile::new(traj, opts.floor);
    let delta_m = ends.delta_m();
    let delta_s = profile.delta_s();
    let q = delta_m + delta_s;
    if !q.is_finite() {
        return Ok(RslBound {
            bound: TimeBound::Infinite(Unbounded::SupportViolation),
            x: Endpoint::Final,
            delta_m,
            delta_s,
            epsilon_used: T::zero(),
        });
    }
    let x = endpoint_for(q);
    let eig = ends.sigma(x).eigen();
    let log_sigma = log_from_eigen(&eig, opts.floor);
    let avg = average_abs(traj, &profile, &log_sigma, T::one(), T::zero(), opts.quadrature);
    let singular = eig.min_value() <= T::lit(SINGULAR_TOL);
    let degenerate = avg <= T::lit(RATE_ZERO);

    if opts.epsilon > T::zero() && (singular || degenerate) {
        let r0 = traj.initial_state();
        let r1 = traj.final_state();
        let at = |eps: T| {
            let l0 = almost_free_log(&ends.sigma[0], eps, opts.floor);
            let l1 = almost_free_log(&ends.sigma[1], eps, opts.floor);
            let num = -l1.trace_with(r1.matrix()) + l0.trace_with(r0.matrix());
            let lx = if x == Endpoint::Initial { &l0 } else { &l1 };
            let avg = average_abs(traj, &profile, lx, T::one(), T::zero(), opts.quadrature);
            TimeBound::from_ratio(num, avg).finite()
        };
        let half = T::lit(0.5);
        let e = opts.epsilon;
        if let (Some(a), Some(b), Some(c)) = (at(e), at(e * half), at(e * half * half)) {
            return Ok(RslBound {
                bound: TimeBound::Finite(richardson([a, b, c]).max(T::zero())),
                x,
                delta_m,
                delta_s,
                epsilon_used: e,
            });
        }
    }
    Ok(RslBound {
        bound: TimeBound::from_ratio(q, avg),
        x,
        delta_m,
        delta_s,
        epsilon_used: T::zero(),
    })
}
