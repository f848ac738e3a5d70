use rayon::prelude::*;

use super::{bound_tm, BoundOptions, TimeBound, Unbounded};
use crate::dynamics::{ChannelSpec, Trajectory};
use crate::error::{Result, RslError};
use crate::qcore::DensityMatrix;
use crate::resources::FreeStateOracle;
use crate::scalar::Real;

/// Tolerance on `|ΔM − μ|` when locating the first crossing.
pub const CONSTRAINT_TOL: f64 = 1e-3;

/// The pair of states attaining the minimum.
#[derive(Clone, Debug, PartialEq)]
pub struct MuWitness<T: Real = f64> {
    /// Index into the initial-state family.
    pub member: usize,
    pub initial: DensityMatrix<T>,
    pub final_state: DensityMatrix<T>,
    /// Grid time at which `ΔM` first meets `μ`.
    pub crossing_time: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinTime<T: Real = f64> {
    pub bound: TimeBound<T>,
    pub witness: Option<MuWitness<T>>,
}

/// Minimum of `T_M` over the family members' trajectory prefixes that end at
/// the first grid time with `|ΔM − μ| ≤ CONSTRAINT_TOL`.
///
/// Only destinations reachable under `channel` within `tau_max` are
/// considered. Members are scanned in parallel; ties go to the lower index.
pub fn min_time_mu<T: Real>(
    channel: &ChannelSpec<T>,
    oracle: &FreeStateOracle<T>,
    family: &[DensityMatrix<T>],
    mu: T,
    tau_max: T,
    grid_points: usize,
    opts: &BoundOptions<T>,
) -> Result<MinTime<T>> {
    if family.is_empty() {
        return Err(RslError::EmptyFamily);
    }
    if mu == T::zero() || !mu.is_finite() {
        return Err(RslError::InvalidArgument("mu must be finite and nonzero".into()));
    }
    opts.validate()?;
    let tol = T::lit(CONSTRAINT_TOL);
    let results = family
        .par_iter()
        .enumerate()
        .map(|(member, rho0)| -> Result<Option<(T, MuWitness<T>)>> {
            let traj = Trajectory::generate(channel, rho0, tau_max, grid_points)?;
            let m0 = oracle.resource_measure(rho0, opts.floor)?;
            let mut hit = None;
            for (i, rho) in traj.states().iter().enumerate().skip(1) {
                let dm = oracle.resource_measure(rho, opts.floor)? - m0;
                if (dm - mu).abs() <= tol {
                    hit = Some(i);
                    break;
                }
            }
            let Some(end) = hit else { return Ok(None) };
            let prefix = traj.truncated(end)?;
            let bound = bound_tm(&prefix, oracle, opts)?.bound.value();
            Ok(Some((
                bound,
                MuWitness {
                    member,
                    initial: rho0.clone(),
                    final_state: prefix.final_state().clone(),
                    crossing_time: prefix.tau(),
                },
            )))
        })
        .collect::<Result<Vec<_>>>()?;
    let best = results
        .into_iter()
        .flatten()
        .fold(None::<(T, MuWitness<T>)>, |acc, cand| match acc {
            Some(a) if a.0 <= cand.0 => Some(a),
            _ => Some(cand),
        });
    Ok(match best {
        Some((v, w)) => MinTime {
            bound: if v.is_finite() {
                TimeBound::Finite(v)
            } else {
                TimeBound::Infinite(Unbounded::ZeroRate)
            },
            witness: Some(w),
        },
        None => MinTime {
            bound: TimeBound::Infinite(Unbounded::Unreachable),
            witness: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{states, DEFAULT_FLOOR};

    fn deph() -> ChannelSpec<f64> {
        ChannelSpec::Dephasing { gamma: 1.0 }
    }

    #[test]
    fn beyond_ln2_is_unreachable() {
        let fam = vec![states::bell_phi_plus()];
        let r = min_time_mu(
            &deph(),
            &FreeStateOracle::Incoherent,
            &fam,
            -0.8,
            5.0,
            200,
            &BoundOptions::default(),
        )
        .unwrap();
        assert_eq!(r.bound, TimeBound::Infinite(Unbounded::Unreachable));
        assert!(r.witness.is_none());
    }

    #[test]
    fn asymptotic_loss_is_unreachable() {
        let w = states::werner(0.5).unwrap();
        let m = FreeStateOracle::WernerSeparable.resource_measure(&w, DEFAULT_FLOOR).unwrap();
        let r = min_time_mu(
            &deph(),
            &FreeStateOracle::WernerSeparable,
            &[w],
            -m,
            2.0,
            1000,
            &BoundOptions::default(),
        )
        .unwrap();
        assert_eq!(r.bound, TimeBound::Infinite(Unbounded::Unreachable));
    }

    #[test]
    fn finite_target_matches_crossing_time() {
        let fam: Vec<_> = [0.0, 0.25, 0.5].iter().map(|&p| states::werner(p).unwrap()).collect();
        let oracle = FreeStateOracle::WernerSeparable;
        let r = min_time_mu(&deph(), &oracle, &fam, -0.1, 2.0, 4001, &BoundOptions::default()).unwrap();
        let w = r.witness.unwrap();
        let t = r.bound.value();
        assert!(t <= w.crossing_time * (1.0 + 1e-6));
        assert!((t - w.crossing_time).abs() <= 1e-3 * w.crossing_time);

        // brute-force crossing times on the same grid
        let earliest = fam
            .iter()
            .map(|rho| {
                let traj = Trajectory::generate(&deph(), rho, 2.0, 4001).unwrap();
                let m0 = oracle.resource_measure(rho, DEFAULT_FLOOR).unwrap();
                traj.states()
                    .iter()
                    .zip(traj.grid())
                    .skip(1)
                    .find(|(s, _)| {
                        (oracle.resource_measure(s, DEFAULT_FLOOR).unwrap() - m0 + 0.1).abs() <= 1e-3
                    })
                    .map(|(_, &t)| t)
                    .unwrap_or(f64::INFINITY)
            })
            .fold(f64::INFINITY, f64::min);
        assert!((t - earliest).abs() <= 1e-3 * earliest);
    }

    #[test]
    fn empty_family_is_an_error() {
        let r = min_time_mu(
            &deph(),
            &FreeStateOracle::Incoherent,
            &[],
            -0.1,
            1.0,
            10,
            &BoundOptions::default(),
        );
        assert!(matches!(r, Err(RslError::EmptyFamily)));
    }
}
