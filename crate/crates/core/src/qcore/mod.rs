//! Complex matrix calculus for small systems (dimension ≤ 16): states,
//! entropies, relative entropy, floored logarithms, tensor structure.

pub mod eigen;
pub mod entropy;
pub mod matrix;
pub mod ops;
pub mod random;
pub mod state;
pub mod states;

pub use eigen::HermitianEigen;
pub use entropy::{
    matrix_log_floor, matrix_log_floor_psd, relative_entropy, relative_entropy_floored,
    von_neumann_entropy, DEFAULT_FLOOR,
};
pub use matrix::CMatrix;
pub use ops::{dephase, partial_trace, tensor};
pub use state::{DensityMatrix, HermitianOperator};
