//! Entropy-to-work accounting for quantum information heat engines.
//!
//! A quantum information heat engine draws work from a single thermal bath by
//! raising the entropy of the systems that fuel it: every bit of purity
//! delivered is worth `k_B T ln 2`. This crate provides
//!
//! - [`qcore`]: dense density matrices, channels, measurement and entropy;
//! - [`thermo`]: the cycle work ledger, Landauer costs and the remote Carnot cycle;
//! - [`protocols`]: Bell-pair, classical-pair, GHZ and even-parity energy distribution;
//! - [`coding`]: Holevo information, the communication/energy identity,
//!   typical subspaces and the refactorization work ledger;
//! - [`verify`]: the self-contained verification suite run by `qihe verify`.

pub mod coding;
pub mod error;
pub mod protocols;
pub mod qcore;
pub mod thermo;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Invariant, Result};
pub use qcore::{
    apply_channel, measure_computational, partial_trace, tensor, von_neumann_entropy,
    DensityMatrix, MeasurementRecord, PureState, QuantumChannel,
};

pub use thermo::{ThermalContext, Units, WorkReport};
