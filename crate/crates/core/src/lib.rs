//! Two-qubit pure-state concurrence from the occupation statistics of a single
//! four-level ancilla.
//!
//! The target qubit's Bloch vector is written into the populations of the
//! ancilla levels `G, G', E, E'` through a short sequence of ancilla rotations
//! and ancilla-controlled Paulis. The four populations realise a tetrahedral
//! (minimal, optimal) qubit POVM, and the concurrence follows from
//! `C² = 4(1 − 3 Σ P²)`.
//!
//! The crate is organised in layers:
//!
//! - [`linalg`]: dense complex matrices, states, density matrices, matrix
//!   exponential and partial trace.
//! - [`gate`]: the ideal gate-level protocol, the POVM, probability inversion
//!   and the concurrence oracles.
//! - [`ion`]: a pulse-level trapped-ion model (carrier, red and blue sideband
//!   pulses on an ancilla ion, a target ion and one motional mode), the
//!   compiled pulse program and the electron-shelving readout cascade.
//! - [`estimator`]: multinomial shot sampling and finite-shot estimators.
//! - [`pipeline`]: run configuration and results shared with the CLI.

pub mod error;
pub mod estimator;
pub mod gate;
pub mod ion;
pub mod linalg;
pub mod pipeline;
pub mod tol;

pub use error::{Error, Result};
pub use estimator::{Estimate, EstimatorMethod, ShotRecord};
pub use gate::{AncillaLevel, BlochVector, ProbVector, ProtocolState, Stage};
pub use ion::{IonLevelScheme, Pulse, PulseProgram};
pub use linalg::{ComplexMatrix, DensityMatrix, StateVector, C64};
pub use pipeline::{Mode, RunConfig, RunResult};
