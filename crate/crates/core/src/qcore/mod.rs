//! Dense complex linear algebra for finite-dimensional quantum states.
//!
//! Subsystems are indexed from 0 in the order of the `dims` list, and the
//! full Hilbert space is their Kronecker product with the first subsystem as
//! the most significant digit.

pub(crate) mod capacity;
pub(crate) mod channel;
mod entropy;
pub mod linalg;
mod measure;
pub(crate) mod ops;
pub mod serial;
mod state;

pub use capacity::{check_capacity, max_dimension, set_max_dimension, DEFAULT_MAX_DIMENSION};
pub use channel::{apply_channel, QuantumChannel};
pub use entropy::{binary_entropy, shannon_entropy, von_neumann_entropy};
pub use measure::{measure_computational, MeasurementRecord};
pub use ops::{partial_trace, tensor, tensor_power, tensor_with_capacity};
pub use state::{make_density, DensityMatrix, PureState, StateSpec};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
