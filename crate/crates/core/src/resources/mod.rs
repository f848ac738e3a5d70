//! Free-state oracles and the relative-entropy resource measure
//! `M(ρ) = S(ρ‖σ▼)`, plus a numerical closest-separable-state search.

mod search;

pub use search::{separable_search, SearchConfig, SearchResult};

use crate::error::{Result, RslError};
use crate::qcore::{dephase, relative_entropy, states, DensityMatrix};
use crate::scalar::Real;

/// Largest off-diagonal entry tolerated outside the `|00⟩⟨11|` coherence for
/// a state to count as a member of the Werner/Bell-diagonal family.
pub const FAMILY_TOL: f64 = 1e-12;

/// A resource theory, identified by how it maps ρ to its closest free state.
#[derive(Clone, Debug, PartialEq)]
pub enum FreeStateOracle<T: Real = f64> {
    /// Free states are diagonal in the computational basis.
    Incoherent,
    /// Two-qubit states with computational-basis populations and only a
    /// `|00⟩⟨11|` coherence; the closest separable state is the dephased one.
    WernerSeparable,
    /// A single free state, the Gibbs state of `ω σ_z` at inverse temperature β.
    Gibbs { omega: T, beta: T, state: DensityMatrix<T> },
    /// A single, arbitrary free state.
    FixedState(DensityMatrix<T>),
}

impl<T: Real> FreeStateOracle<T> {
    pub fn gibbs(omega: T, beta: T) -> Result<Self> {
        if !(omega > T::zero() && beta > T::zero() && omega.is_finite() && beta.is_finite()) {
            return Err(RslError::InvalidArgument(
                "Gibbs oracle needs positive, finite omega and beta".into(),
            ));
        }
        Ok(Self::Gibbs {
            omega,
            beta,
            state: states::gibbs(omega, beta),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Incoherent => "incoherent",
            Self::WernerSeparable => "werner-separable",
            Self::Gibbs { .. } => "gibbs",
            Self::FixedState(_) => "fixed",
        }
    }

    /// Whether `rho` lies in the oracle's declared domain.
    pub fn supports(&self, rho: &DensityMatrix<T>) -> bool {
        self.check(rho).is_ok()
    }

    fn check(&self, rho: &DensityMatrix<T>) -> Result<()> {
        match self {
            Self::Incoherent => Ok(()),
            Self::WernerSeparable => {
                if is_werner_family(rho) {
                    Ok(())
                } else {
                    Err(RslError::UnsupportedState(
                        "state outside the two-qubit Werner/Bell-diagonal family; \
                         use separable_search for general states"
                            .into(),
                    ))
                }
            }
            Self::Gibbs { state, .. } | Self::FixedState(state) => {
                if state.dim() == rho.dim() {
                    Ok(())
                } else {
                    Err(RslError::DimensionMismatch {
                        expected: state.dim(),
                        found: rho.dim(),
                    })
                }
            }
        }
    }

    /// The free state `σ▼` minimising `S(ρ‖σ)`.
    pub fn closest_free(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        self.check(rho)?;
        Ok(match self {
            Self::Incoherent | Self::WernerSeparable => dephase(rho),
            Self::Gibbs { state, .. } | Self::FixedState(state) => state.clone(),
        })
    }

    /// `M(ρ) = S(ρ‖σ▼)` in nats; `+∞` when ρ leaves the support of σ▼.
    pub fn resource_measure(&self, rho: &DensityMatrix<T>, floor: T) -> Result<T> {
        let sigma = self.closest_free(rho)?;
        relative_entropy(rho, &sigma, floor)
    }
}

/// Dimension 4 with `[2, 2]` factors and no coherence besides `|00⟩⟨11|`.
pub fn is_werner_family<T: Real>(rho: &DensityMatrix<T>) -> bool {
    if rho.local_dims() != [2, 2] {
        return false;
    }
    let m = rho.matrix();
    let tol = T::tol(FAMILY_TOL);
    (0..4).all(|i| {
        (0..4).all(|j| i == j || matches!((i, j), (0, 3) | (3, 0)) || m[(i, j)].norm() <= tol)
    })
}
