//! Resource speed limits for small open quantum systems.
//!
//! The crate simulates dephasing, depolarising and thermalising dynamics of
//! one- and two-qubit systems, measures resources through the quantum
//! relative entropy to the closest free state, and evaluates lower bounds on
//! the time needed to change a resource (and the relative-entropy quantum
//! speed limit) along a trajectory.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`, which is what every
//! tolerance in the test suite is calibrated for.

pub mod bounds;
pub mod dynamics;
pub mod error;
pub mod qcore;
pub mod resources;
pub mod scalar;

pub use error::{Result, RslError};
pub use scalar::Real;

pub type CMatrix64 = qcore::CMatrix<f64>;
pub type DensityMatrix64 = qcore::DensityMatrix<f64>;
pub type DensityMatrix32 = qcore::DensityMatrix<f32>;
pub type HermitianOperator64 = qcore::HermitianOperator<f64>;
pub type Trajectory64 = dynamics::Trajectory<f64>;
pub type ChannelSpec64 = dynamics::ChannelSpec<f64>;
pub type FreeStateOracle64 = resources::FreeStateOracle<f64>;
pub type BoundReport64 = bounds::BoundReport<f64>;
pub type BoundOptions64 = bounds::BoundOptions<f64>;
