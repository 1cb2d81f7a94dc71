//! Numerical tolerances shared by every module.

/// Hermiticity, trace and Kraus completeness checks.
pub const STATE: f64 = 1e-10;

/// Eigenvalues in `[-EIGEN_CLAMP, 0)` are treated as solver noise and clamped to zero.
pub const EIGEN_CLAMP: f64 = 1e-10;

/// Eigenvalues within this distance of 0 or 1 are snapped before entropy evaluation.
pub const EIGEN_SNAP: f64 = 1e-13;

/// Pure-state amplitude norm.
pub const PURE_NORM: f64 = 1e-12;

/// Traces below this are null outcomes.
pub const NULL_TRACE: f64 = 1e-14;

/// Projector idempotence.
pub const IDEMPOTENT: f64 = 1e-9;

/// Von Neumann entropies this close to an integer number of bits are reported
/// as that integer.
pub const ENTROPY_SNAP: f64 = 1e-12;
