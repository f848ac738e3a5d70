//! Lower bounds on evolution time: resource speed limits, generation and
//! degradation bounds, the relative-entropy quantum speed limit and the
//! minimum time to change a resource by a fixed amount.
//!
//! Every bound has the shape `|numerator| / ⟨|rate|⟩_t`, where the average
//! is taken over the trajectory grid (see [`Quadrature`]).

mod mu;
mod quadrature;
mod qsl;
mod rsl;

pub use mu::{min_time_mu, MinTime, MuWitness, CONSTRAINT_TOL};
pub use quadrature::{time_average, time_average_with, Quadrature};
pub use qsl::{bound_qsl, bound_td, bound_td_near_free, bound_tg};
pub use rsl::{bound_tm, bound_ttilde, RslBound};

use std::fmt;

use crate::dynamics::Trajectory;
use crate::error::{Result, RslError};
use crate::qcore::{DensityMatrix, DEFAULT_FLOOR};
use crate::resources::FreeStateOracle;
use crate::scalar::Real;

/// Numerators at or below this magnitude count as zero.
pub const NUMERATOR_ZERO: f64 = 1e-13;
/// Time-averaged rates at or below this magnitude count as degenerate.
pub const RATE_ZERO: f64 = 1e-13;
/// Smallest eigenvalue below which a free state counts as singular.
pub const SINGULAR_TOL: f64 = 1e-10;

/// Why a bound is infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unbounded {
    /// Nonzero numerator over a vanishing time-averaged rate.
    ZeroRate,
    /// A relative entropy in the numerator is infinite.
    SupportViolation,
    /// No trajectory reaches the requested resource change.
    Unreachable,
}

impl fmt::Display for Unbounded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ZeroRate => "nonzero numerator over a vanishing average rate",
            Self::SupportViolation => "relative entropy is infinite (support mismatch)",
            Self::Unreachable => "requested resource change not reached on any trajectory",
        })
    }
}

/// A time bound, possibly infinite with a diagnostic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeBound<T: Real = f64> {
    Finite(T),
    Infinite(Unbounded),
}

impl<T: Real> TimeBound<T> {
    /// The bound as a number, `+∞` for infinite bounds.
    pub fn value(&self) -> T {
        match self {
            Self::Finite(v) => *v,
            Self::Infinite(_) => T::infinity(),
        }
    }

    pub fn finite(&self) -> Option<T> {
        match self {
            Self::Finite(v) => Some(*v),
            Self::Infinite(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }

    pub(crate) fn from_ratio(numerator: T, average: T) -> Self {
        let num = numerator.abs();
        if num <= T::lit(NUMERATOR_ZERO) {
            Self::Finite(T::zero())
        } else if !(average > T::zero()) || !average.is_finite() {
            Self::Infinite(Unbounded::ZeroRate)
        } else {
            Self::Finite(num / average)
        }
    }
}

/// Which endpoint's closest free state enters the denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Initial,
    Final,
}

impl Endpoint {
    /// `0` or `τ`.
    pub fn time<T: Real>(self, tau: T) -> T {
        match self {
            Self::Initial => T::zero(),
            Self::Final => tau,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundOptions<T: Real = f64> {
    /// Eigenvalue floor for logarithms, in `(0, 1e-6]`.
    pub floor: T,
    /// Almost-free-state perturbation for singular free states, in
    /// `[0, 1e-3]`; zero disables the regularisation.
    pub epsilon: T,
    pub quadrature: Quadrature,
    pub orientation: EntropyOrientation,
}

/// Sign of the entropy change in the reverse QSL direction `T(ρ_τ, ρ₀)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EntropyOrientation {
    /// `|S(ρ_τ‖ρ₀) + ΔS|`: the entropy change is measured along the
    /// direction of the relative entropy, so both directions are valid
    /// lower bounds.
    #[default]
    Flipped,
    /// `|S(ρ_τ‖ρ₀) − ΔS|` with `ΔS = S(ρ_τ) − S(ρ₀)` in both directions.
    /// Can exceed τ when the entropy changes.
    Literal,
}

impl<T: Real> Default for BoundOptions<T> {
    fn default() -> Self {
        Self {
            floor: T::lit(DEFAULT_FLOOR),
            epsilon: T::lit(1e-6),
            quadrature: Quadrature::default(),
            orientation: EntropyOrientation::default(),
        }
    }
}

impl<T: Real> BoundOptions<T> {
    pub fn validate(&self) -> Result<()> {
        crate::qcore::entropy::check_floor(self.floor)?;
        if !(self.epsilon >= T::zero() && self.epsilon <= T::lit(1e-3)) {
            return Err(RslError::InvalidArgument(format!(
                "epsilon {} outside [0, 1e-3]",
                self.epsilon.to_f64_lossy()
            )));
        }
        Ok(())
    }
}

/// Optional generation/degradation bounds to evaluate alongside the RSLs.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum Framing<T: Real = f64> {
    #[default]
    None,
    /// Generation from the free state σ (must equal ρ₀).
    Generation(DensityMatrix<T>),
    /// Degradation into the free state σ (must equal ρ_τ).
    Degradation(DensityMatrix<T>),
    /// Degradation towards σ when ρ_τ is only close to it.
    NearFreeDegradation(DensityMatrix<T>),
}

/// Every bound evaluated on one trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport<T: Real = f64> {
    pub tau: T,
    pub delta_m: T,
    pub delta_s: T,
    pub t_m: TimeBound<T>,
    pub t_tilde: TimeBound<T>,
    pub t_qsl: TimeBound<T>,
    pub t_g: Option<TimeBound<T>>,
    pub t_d: Option<TimeBound<T>>,
    pub x_m: Endpoint,
    pub x_tilde: Endpoint,
    /// Perturbation used to regularise `T̃_M`; zero when not needed.
    pub epsilon_used: T,
    pub quadrature_points: usize,
}

impl<T: Real> BoundReport<T> {
    /// All present bounds, labelled.
    pub fn bounds(&self) -> Vec<(&'static str, TimeBound<T>)> {
        let mut out = vec![("T_M", self.t_m), ("T_tilde", self.t_tilde), ("T_qsl", self.t_qsl)];
        if let Some(b) = self.t_g {
            out.push(("T_g", b));
        }
        if let Some(b) = self.t_d {
            out.push(("T_d", b));
        }
        out
    }
}

/// Evaluates `T_M`, `T̃_M`, `T_qsl` and the bounds selected by `framing`.
pub fn evaluate<T: Real>(
    traj: &Trajectory<T>,
    oracle: &FreeStateOracle<T>,
    opts: &BoundOptions<T>,
    framing: &Framing<T>,
) -> Result<BoundReport<T>> {
    let tm = bound_tm(traj, oracle, opts)?;
    let tt = bound_ttilde(traj, oracle, opts)?;
    let qsl = bound_qsl(traj, opts)?;
    let (t_g, t_d) = match framing {
        Framing::None => (None, None),
        Framing::Generation(s) => (Some(bound_tg(traj, s, opts)?), None),
        Framing::Degradation(s) => (None, Some(bound_td(traj, s, opts)?)),
        Framing::NearFreeDegradation(s) => (None, Some(bound_td_near_free(traj, s, opts)?)),
    };
    Ok(BoundReport {
        tau: traj.tau(),
        delta_m: tm.delta_m,
        delta_s: tt.delta_s,
        t_m: tm.bound,
        t_tilde: tt.bound,
        t_qsl: qsl,
        t_g,
        t_d,
        x_m: tm.x,
        x_tilde: tt.x,
        epsilon_used: tt.epsilon_used,
        quadrature_points: traj.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_conventions() {
        assert_eq!(TimeBound::from_ratio(0.0, 0.0), TimeBound::Finite(0.0));
        assert_eq!(TimeBound::from_ratio(1e-14, 1.0), TimeBound::Finite(0.0));
        assert_eq!(
            TimeBound::from_ratio(1.0, 0.0),
            TimeBound::Infinite(Unbounded::ZeroRate)
        );
        assert_eq!(TimeBound::from_ratio(-2.0, 4.0), TimeBound::Finite(0.5));
        assert_eq!(TimeBound::<f64>::Infinite(Unbounded::ZeroRate).value(), f64::INFINITY);
    }

    #[test]
    fn option_ranges() {
        assert!(BoundOptions::<f64>::default().validate().is_ok());
        let bad = BoundOptions {
            epsilon: 1e-2,
            ..BoundOptions::<f64>::default()
        };
        assert!(bad.validate().is_err());
        let bad = BoundOptions {
            floor: 0.0,
            ..BoundOptions::<f64>::default()
        };
        assert!(bad.validate().is_err());
    }
}
