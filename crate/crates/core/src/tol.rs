//! Numerical tolerances used across the crate.

/// Hermiticity, unitarity and other structural checks.
pub const STRUCTURAL: f64 = 1e-10;

/// Norms and traces of states after unitary evolution.
pub const NORMALIZATION: f64 = 1e-12;

/// Smallest eigenvalue accepted for a density matrix.
pub const MIN_EIGENVALUE: f64 = -1e-10;

/// Accepted deviation from unit norm for caller-supplied pure states.
pub const INPUT_NORM: f64 = 1e-9;

/// Accepted deviation from unit sum for exact probability vectors.
pub const PROB_SUM: f64 = 1e-9;

/// Phonon population outside the one-phonon manifold that marks a pulse
/// run as invalid.
pub const LEAKAGE: f64 = 1e-10;

/// Largest total Hilbert-space dimension a Kronecker product may produce.
pub const MAX_DIM: usize = 4096;
