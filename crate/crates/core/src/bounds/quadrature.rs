use rayon::prelude::*;

use crate::dynamics::Trajectory;
use crate::error::{Result, RslError};
use crate::qcore::entropy::{entropy_of_spectrum, log_from_eigen};
use crate::qcore::HermitianOperator;
use crate::scalar::Real;

/// How `∫|f| dt` is approximated on the trajectory grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Quadrature {
    /// Exact per-interval integrals of the signed integrand, obtained from
    /// differences of `Tr[ρ X]` and `S(ρ)` between grid states, plus a
    /// linear-interpolation correction on intervals where the sampled
    /// integrand changes sign. Insensitive to the logarithmic divergence of
    /// the entropy rate at pure states.
    #[default]
    Increment,
    /// Composite trapezoid on sampled `|f|`.
    Trapezoid,
    /// Composite Simpson on sampled `|f|` (trapezoid on a trailing odd interval).
    Simpson,
}

fn check_grid<T: Real>(samples: &[T], grid: &[T]) -> Result<T> {
    if grid.len() < 2 || samples.len() != grid.len() {
        return Err(RslError::EmptyGrid);
    }
    let tau = grid[grid.len() - 1] - grid[0];
    if !(tau > T::zero()) {
        return Err(RslError::InvalidArgument("grid does not span a positive duration".into()));
    }
    Ok(tau)
}

/// `(1/τ)∫₀^τ |f| dt` by the composite trapezoid rule on the grid.
pub fn time_average<T: Real>(samples: &[T], grid: &[T]) -> Result<T> {
    time_average_with(samples, grid, Quadrature::Trapezoid)
}

/// `(1/τ)∫₀^τ |f| dt` from samples. [`Quadrature::Increment`] needs the
/// underlying states and falls back to the trapezoid rule here.
pub fn time_average_with<T: Real>(samples: &[T], grid: &[T], rule: Quadrature) -> Result<T> {
    let tau = check_grid(samples, grid)?;
    let abs: Vec<T> = samples.iter().map(|f| f.abs()).collect();
    let integral = match rule {
        Quadrature::Simpson => simpson(&abs, grid),
        Quadrature::Trapezoid | Quadrature::Increment => trapezoid(&abs, grid),
    };
    Ok(integral / tau)
}

fn trapezoid<T: Real>(f: &[T], grid: &[T]) -> T {
    grid.windows(2)
        .zip(f.windows(2))
        .map(|(t, y)| (t[1] - t[0]) * (y[0] + y[1]) * T::lit(0.5))
        .sum()
}

fn simpson<T: Real>(f: &[T], grid: &[T]) -> T {
    let n = grid.len() - 1;
    let pairs = n / 2;
    let mut acc = T::zero();
    for p in 0..pairs {
        let i = 2 * p;
        let h0 = grid[i + 1] - grid[i];
        let h1 = grid[i + 2] - grid[i + 1];
        let two = T::lit(2.0);
        acc = acc
            + (h0 + h1) / T::lit(6.0)
                * ((two - h1 / h0) * f[i]
                    + (h0 + h1) * (h0 + h1) / (h0 * h1) * f[i + 1]
                    + (two - h0 / h1) * f[i + 2]);
    }
    if n % 2 == 1 {
        acc = acc + (grid[n] - grid[n - 1]) * (f[n - 1] + f[n]) * T::lit(0.5);
    }
    acc
}

/// Entropies and floored entropy rates at every grid point.
pub(crate) struct Profile<T: Real> {
    pub entropy: Vec<T>,
    pub rate: Vec<T>,
}

impl<T: Real> Profile<T> {
    pub fn new(traj: &Trajectory<T>, floor: T) -> Self {
        let (entropy, rate) = traj
            .states()
            .par_iter()
            .zip(traj.derivatives().par_iter())
            .map(|(rho, l)| {
                let eig = rho.eigen();
                let s = entropy_of_spectrum(&eig.values);
                let rate = -log_from_eigen(&eig, floor).trace_with(l.matrix());
                (s, rate)
            })
            .unzip();
        Self { entropy, rate }
    }

    pub fn delta_s(&self) -> T {
        self.entropy[self.entropy.len() - 1] - self.entropy[0]
    }
}

/// Time average of `|a·Tr[L_t X] + b·Ṡ(ρ_t)|` along the trajectory.
pub(crate) fn average_abs<T: Real>(
    traj: &Trajectory<T>,
    profile: &Profile<T>,
    x: &HermitianOperator<T>,
    a: T,
    b: T,
    rule: Quadrature,
) -> T {
    let grid = traj.grid();
    let samples: Vec<T> = traj
        .derivatives()
        .iter()
        .zip(&profile.rate)
        .map(|(l, &r)| a * x.trace_with(l.matrix()) + b * r)
        .collect();
    let tau = grid[grid.len() - 1];
    match rule {
        Quadrature::Trapezoid | Quadrature::Simpson => {
            let abs: Vec<T> = samples.iter().map(|f| f.abs()).collect();
            let integral = if rule == Quadrature::Simpson {
                simpson(&abs, grid)
            } else {
                trapezoid(&abs, grid)
            };
            integral / tau
        }
        Quadrature::Increment => {
            let expect: Vec<T> = traj.states().iter().map(|r| x.trace_with(r.matrix())).collect();
            let mut total = T::zero();
            for i in 0..grid.len() - 1 {
                let exact = a * (expect[i + 1] - expect[i]) + b * (profile.entropy[i + 1] - profile.entropy[i]);
                let mut piece = exact.abs();
                let (f0, f1) = (samples[i], samples[i + 1]);
                if f0 * f1 < T::zero() {
                    let h = grid[i + 1] - grid[i];
                    let denom = T::lit(2.0) * (f0 - f1).abs();
                    let pos = h * f0 * f0 / denom;
                    let neg = h * f1 * f1 / denom;
                    piece = piece + T::lit(2.0) * pos.min(neg);
                }
                total = total + piece;
            }
            total / tau
        }
    }
}
