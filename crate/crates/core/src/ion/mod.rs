//! Pulse-level trapped-ion model of the protocol.
//!
//! Hilbert space: ancilla ion (8 levels) ⊗ target ion (3 levels) ⊗ one
//! motional mode truncated at `fock_cutoff` ⊗ a spectator qubit that no pulse
//! addresses. Carrier pulses rotate a two-level block of one ion; red and
//! blue sideband pulses exchange one phonon with that block in the
//! Lamb–Dicke regime. Controlled operations use the motional mode as a bus:
//! a sideband π pulse on the ancilla maps the control level onto one phonon,
//! a 2π red pulse between `g_q` and an auxiliary target level flips the sign
//! of `|g_q, 1⟩`, and a second sideband π pulse maps the phonon back.

mod levels;
mod program;
mod pulse;
mod readout;

pub use levels::{
    AncillaIonLevel, Ion, IonLevelScheme, TargetLevel, ANCILLA_ION, DEFAULT_FOCK_CUTOFF, PHONON, SPECTATOR, TARGET_ION,
};
pub use program::{
    compile_protocol, embed_gate_amplitudes, execute, gate_fidelity, initial_state, run_pulse_protocol, Execution,
    PulseProgram, PulseRun, PREPARATION_PULSES,
};
pub use pulse::{carrier_unitary, excitation_number, pulse_area, sideband_unitary, Pulse, PulseKind};
pub use readout::{compile_readout, measure_cascade, CascadeStep, CompiledCascade, FluorescenceOutcome, Readout};
