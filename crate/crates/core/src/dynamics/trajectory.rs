use num_complex::Complex;
use rayon::prelude::*;

use super::channel::{analytic_derivative, check_inputs, state_unchecked};
use super::lindblad::{thermal_trajectory, DEFAULT_SUBSTEPS};
use super::ChannelSpec;
use crate::error::{Result, RslError};
use crate::qcore::{DensityMatrix, HermitianOperator};
use crate::scalar::Real;

/// Default number of grid points (including both endpoints).
pub const DEFAULT_GRID_POINTS: usize = 1000;

const TRACE_DRIFT_TOL: f64 = 1e-9;

/// What produced a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub enum TrajectorySource<T: Real = f64> {
    Channel(ChannelSpec<T>),
    /// `L = −i[H, ρ]`.
    Unitary(HermitianOperator<T>),
    /// Assembled by the caller, truncated or time-reversed.
    External,
}

/// Discretised `t ↦ (ρ_t, L_t(ρ_t))` on `[0, τ]`.
#[derive(Clone, Debug)]
pub struct Trajectory<T: Real = f64> {
    source: TrajectorySource<T>,
    grid: Vec<T>,
    states: Vec<DensityMatrix<T>>,
    derivatives: Vec<HermitianOperator<T>>,
}

pub(crate) fn uniform_grid<T: Real>(tau: T, points: usize) -> Vec<T> {
    let last = T::from_usize_lossy(points - 1);
    (0..points)
        .map(|i| if i + 1 == points { tau } else { tau * T::from_usize_lossy(i) / last })
        .collect()
}

fn check_span<T: Real>(tau: T, points: usize) -> Result<()> {
    if points < 2 {
        return Err(RslError::EmptyGrid);
    }
    if !(tau > T::zero() && tau.is_finite()) {
        return Err(RslError::InvalidArgument(format!(
            "duration must be positive and finite, got {}",
            tau.to_f64_lossy()
        )));
    }
    Ok(())
}

impl<T: Real> Trajectory<T> {
    /// Samples `channel` from `ρ₀` on a uniform grid of `grid_points` points.
    ///
    /// Analytic channels are evaluated in closed form (in parallel); the
    /// thermal channel is integrated with RK4, [`DEFAULT_SUBSTEPS`] substeps
    /// per interval.
    pub fn generate(
        channel: &ChannelSpec<T>,
        rho0: &DensityMatrix<T>,
        tau: T,
        grid_points: usize,
    ) -> Result<Self> {
        check_span(tau, grid_points)?;
        check_inputs(channel, rho0, tau)?;
        if channel.is_thermal() {
            return thermal_trajectory(channel, rho0, tau, grid_points - 1, DEFAULT_SUBSTEPS);
        }
        let grid = uniform_grid(tau, grid_points);
        let states = grid
            .par_iter()
            .enumerate()
            .map(|(i, &t)| {
                if i == 0 {
                    Ok(rho0.clone())
                } else {
                    state_unchecked(channel, rho0, t)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let derivatives = grid
            .par_iter()
            .map(|&t| analytic_derivative(channel, rho0.matrix(), t))
            .collect();
        Ok(Self::from_raw(TrajectorySource::Channel(channel.clone()), grid, states, derivatives))
    }

    /// `ρ_t = e^{−iHt} ρ₀ e^{iHt}` with `L = −i[H, ρ_t]`.
    pub fn unitary(
        hamiltonian: &HermitianOperator<T>,
        rho0: &DensityMatrix<T>,
        tau: T,
        grid_points: usize,
    ) -> Result<Self> {
        check_span(tau, grid_points)?;
        if hamiltonian.dim() != rho0.dim() {
            return Err(RslError::DimensionMismatch {
                expected: rho0.dim(),
                found: hamiltonian.dim(),
            });
        }
        let grid = uniform_grid(tau, grid_points);
        let dims = rho0.local_dims().to_vec();
        let minus_i = Complex::new(T::zero(), -T::one());
        let (states, derivatives): (Vec<_>, Vec<_>) = grid
            .par_iter()
            .enumerate()
            .map(|(i, &t)| {
                let state = if i == 0 {
                    rho0.clone()
                } else {
                    let u = hamiltonian.unitary(t);
                    let m = u.matmul(rho0.matrix()).matmul(&u.adjoint());
                    DensityMatrix::from_trusted(m, dims.clone())
                };
                let l = hamiltonian.matrix().commutator(state.matrix()).scale_complex(minus_i);
                (state, HermitianOperator::from_trusted(l))
            })
            .unzip();
        Ok(Self::from_raw(
            TrajectorySource::Unitary(hamiltonian.clone()),
            grid,
            states,
            derivatives,
        ))
    }

    /// Validates caller-supplied samples: the grid starts at 0 and strictly
    /// increases, states keep unit trace and derivatives are traceless.
    pub fn from_parts(
        grid: Vec<T>,
        states: Vec<DensityMatrix<T>>,
        derivatives: Vec<HermitianOperator<T>>,
    ) -> Result<Self> {
        if grid.len() < 2 {
            return Err(RslError::EmptyGrid);
        }
        if states.len() != grid.len() || derivatives.len() != grid.len() {
            return Err(RslError::InvalidArgument(format!(
                "{} grid points but {} states and {} derivatives",
                grid.len(),
                states.len(),
                derivatives.len()
            )));
        }
        if grid[0] != T::zero() || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(RslError::InvalidArgument(
                "grid must start at 0 and increase strictly".into(),
            ));
        }
        let dim = states[0].dim();
        let tol = T::tol(TRACE_DRIFT_TOL);
        for (s, l) in states.iter().zip(&derivatives) {
            if s.dim() != dim || l.dim() != dim {
                return Err(RslError::DimensionMismatch {
                    expected: dim,
                    found: if s.dim() != dim { s.dim() } else { l.dim() },
                });
            }
            if (s.matrix().trace().re - T::one()).abs() > tol || l.trace().abs() > tol {
                return Err(RslError::InvalidArgument(
                    "state trace drift or generator trace above 1e-9".into(),
                ));
            }
        }
        Ok(Self::from_raw(TrajectorySource::External, grid, states, derivatives))
    }

    pub(crate) fn from_raw(
        source: TrajectorySource<T>,
        grid: Vec<T>,
        states: Vec<DensityMatrix<T>>,
        derivatives: Vec<HermitianOperator<T>>,
    ) -> Self {
        Self {
            source,
            grid,
            states,
            derivatives,
        }
    }

    pub fn source(&self) -> &TrajectorySource<T> {
        &self.source
    }

    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn states(&self) -> &[DensityMatrix<T>] {
        &self.states
    }

    pub fn derivatives(&self) -> &[HermitianOperator<T>] {
        &self.derivatives
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn tau(&self) -> T {
        *self.grid.last().expect("non-empty grid")
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn initial_state(&self) -> &DensityMatrix<T> {
        &self.states[0]
    }

    pub fn final_state(&self) -> &DensityMatrix<T> {
        self.states.last().expect("non-empty trajectory")
    }

    /// Prefix ending at grid index `end` (inclusive).
    pub fn truncated(&self, end: usize) -> Result<Self> {
        if end == 0 || end >= self.len() {
            return Err(RslError::InvalidArgument(format!(
                "truncation index {end} outside 1..{}",
                self.len()
            )));
        }
        Ok(Self::from_raw(
            TrajectorySource::External,
            self.grid[..=end].to_vec(),
            self.states[..=end].to_vec(),
            self.derivatives[..=end].to_vec(),
        ))
    }

    /// The same path traversed backwards: `ρ'_t = ρ_{τ−t}`, `L'_t = −L_{τ−t}`.
    pub fn reversed(&self) -> Self {
        let tau = self.tau();
        let grid = self.grid.iter().rev().map(|&t| tau - t).collect::<Vec<_>>();
        let states = self.states.iter().rev().cloned().collect();
        let derivatives = self
            .derivatives
            .iter()
            .rev()
            .map(|l| HermitianOperator::from_trusted(-l.matrix()))
            .collect();
        let mut grid = grid;
        grid[0] = T::zero();
        Self::from_raw(TrajectorySource::External, grid, states, derivatives)
    }
}
