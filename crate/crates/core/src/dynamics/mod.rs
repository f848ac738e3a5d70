//! Channel families, trajectories `t ↦ (ρ_t, L_t(ρ_t))` and the thermal
//! Lindblad integrator.

mod channel;
mod lindblad;
mod trajectory;

pub use channel::{entropy_rate, liouvillian_at, state_at};
pub use lindblad::{
    integrate_lindblad, integrate_lindblad_with, thermal_rhs, DEFAULT_SUBSTEPS, MIN_STEPS,
};
pub use trajectory::{Trajectory, TrajectorySource, DEFAULT_GRID_POINTS};

use crate::error::{Result, RslError};
use crate::qcore::{states, CMatrix, DensityMatrix, HermitianOperator};
use crate::scalar::Real;

/// How the thermal occupation number is computed from `ω` and `β`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OccupationConvention {
    /// `N = 1/(e^{2βω} − 1)`; the Gibbs state of `ω σ_z` is the fixed point.
    #[default]
    DetailedBalance,
    /// `N = 1/(e^{2ω/β} − 1)`, the expression as printed alongside the model.
    AsWritten,
}

/// Sign of the anticommutator term in the dissipator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DissipatorConvention {
    /// `Γ(2σρσ† − {σ†σ, ρ})`, trace preserving.
    #[default]
    TracePreserving,
    /// `Γ(2σρσ† + {σ†σ, ρ})`; does not preserve the trace. Kept as a
    /// negative control for the integrator's trace check.
    AsWritten,
}

/// Parameters of a qubit with `H₀ = ω σ_z` coupled to a bath at inverse
/// temperature `β` with spontaneous-emission rate `γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermalParams<T: Real = f64> {
    pub gamma: T,
    pub omega: T,
    pub beta: T,
    pub occupation: OccupationConvention,
    pub dissipator: DissipatorConvention,
}

impl<T: Real> ThermalParams<T> {
    pub fn new(gamma: T, omega: T, beta: T) -> Self {
        Self {
            gamma,
            omega,
            beta,
            occupation: OccupationConvention::default(),
            dissipator: DissipatorConvention::default(),
        }
    }

    /// Mean bath occupation `N`.
    pub fn occupation_number(&self) -> T {
        let x = match self.occupation {
            OccupationConvention::DetailedBalance => T::lit(2.0) * self.beta * self.omega,
            OccupationConvention::AsWritten => T::lit(2.0) * self.omega / self.beta,
        };
        T::one() / x.exp_m1()
    }

    /// `(Γ₊, Γ₋) = (γN/2, γ(N+1)/2)`.
    pub fn rates(&self) -> (T, T) {
        let n = self.occupation_number();
        let half = T::lit(0.5);
        (self.gamma * n * half, self.gamma * (n + T::one()) * half)
    }

    pub fn hamiltonian(&self) -> HermitianOperator<T> {
        states::qubit_hamiltonian(self.omega)
    }

    pub fn gibbs(&self) -> DensityMatrix<T> {
        states::gibbs(self.omega, self.beta)
    }
}

/// One of the five dynamics families.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelSpec<T: Real = f64> {
    /// Coherences decay as `ν(t) = e^{−γt}`.
    Dephasing { gamma: T },
    /// Coherences decay as `ν(t) = e^{−γ(t + sin²(kt)/k)}`, `k > γ`.
    DephasingNonMonotonic { gamma: T, k: T },
    /// `ρ_t = e^{−γt} ρ₀ + (1 − e^{−γt}) I/d`.
    Depolarising { gamma: T },
    /// Depolarising with exponent `γ(t + sin²(kt)/k)`, `k > γ`.
    DepolarisingNonMonotonic { gamma: T, k: T },
    Thermal(ThermalParams<T>),
}

impl<T: Real> ChannelSpec<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(RslError::InvalidChannel(format!(
                    "{name} must be positive and finite, got {}",
                    v.to_f64_lossy()
                )))
            }
        };
        match self {
            Self::Dephasing { gamma } | Self::Depolarising { gamma } => positive("gamma", *gamma),
            Self::DephasingNonMonotonic { gamma, k }
            | Self::DepolarisingNonMonotonic { gamma, k } => {
                positive("gamma", *gamma)?;
                positive("k", *k)?;
                if *k <= *gamma {
                    return Err(RslError::InvalidChannel(format!(
                        "non-monotonic channels need k > gamma (k = {}, gamma = {})",
                        k.to_f64_lossy(),
                        gamma.to_f64_lossy()
                    )));
                }
                Ok(())
            }
            Self::Thermal(p) => {
                positive("gamma", p.gamma)?;
                positive("omega", p.omega)?;
                positive("beta", p.beta)
            }
        }
    }

    pub fn gamma(&self) -> T {
        match self {
            Self::Dephasing { gamma }
            | Self::Depolarising { gamma }
            | Self::DephasingNonMonotonic { gamma, .. }
            | Self::DepolarisingNonMonotonic { gamma, .. } => *gamma,
            Self::Thermal(p) => p.gamma,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Dephasing { .. } => "dephasing",
            Self::DephasingNonMonotonic { .. } => "dephasing-nm",
            Self::Depolarising { .. } => "depolarising",
            Self::DepolarisingNonMonotonic { .. } => "depolarising-nm",
            Self::Thermal(_) => "thermal",
        }
    }

    pub fn is_thermal(&self) -> bool {
        matches!(self, Self::Thermal(_))
    }

    /// Decay exponent `Γ(t)` of the analytic channels (`ν = e^{−Γ}`).
    pub(crate) fn decay_exponent(&self, t: T) -> T {
        match self {
            Self::Dephasing { gamma } | Self::Depolarising { gamma } => *gamma * t,
            Self::DephasingNonMonotonic { gamma, k }
            | Self::DepolarisingNonMonotonic { gamma, k } => {
                let s = (*k * t).sin();
                *gamma * (t + s * s / *k)
            }
            Self::Thermal(_) => unreachable!("thermal channel has no closed form"),
        }
    }

    /// `dΓ/dt`.
    pub(crate) fn decay_rate(&self, t: T) -> T {
        match self {
            Self::Dephasing { gamma } | Self::Depolarising { gamma } => *gamma,
            Self::DephasingNonMonotonic { gamma, k }
            | Self::DepolarisingNonMonotonic { gamma, k } => {
                *gamma * (T::one() + (T::lit(2.0) * *k * t).sin())
            }
            Self::Thermal(_) => unreachable!("thermal channel has no closed form"),
        }
    }
}

pub(crate) fn identity_over_dim<T: Real>(dim: usize) -> CMatrix<T> {
    CMatrix::identity(dim).scale(T::one() / T::from_usize_lossy(dim))
}
