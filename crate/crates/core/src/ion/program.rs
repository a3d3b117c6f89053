use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::{self, AncillaLevel, ProtocolState};
use crate::linalg::{ComplexMatrix, StateVector, C64};
use crate::tol;

use super::levels::{AncillaIonLevel as A, Ion, IonLevelScheme, TargetLevel as T, PHONON};
use super::pulse::Pulse;

/// Ordered list of pulses, executed left to right.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseProgram {
    pub label: String,
    pub pulses: Vec<Pulse>,
}

impl PulseProgram {
    pub fn new(label: impl Into<String>, pulses: Vec<Pulse>) -> Self {
        Self { label: label.into(), pulses }
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    /// Reversed program with every pulse inverted.
    pub fn inverse(&self) -> Self {
        Self {
            label: format!("{} (inverse)", self.label),
            pulses: self.pulses.iter().rev().map(Pulse::inverse).collect(),
        }
    }

    pub fn then(mut self, other: &PulseProgram) -> Self {
        self.pulses.extend_from_slice(&other.pulses);
        self
    }

    /// Line-oriented text form: a `# label` header, then one pulse per line.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses [`to_text`](Self::to_text) output. Blank lines are skipped and
    /// the first comment line, if any, becomes the label.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut label = None;
        let mut pulses = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                label.get_or_insert_with(|| comment.trim().to_string());
                continue;
            }
            let pulse = line.parse().map_err(|msg| Error::Parse { line: i + 1, msg })?;
            pulses.push(pulse);
        }
        Ok(Self { label: label.unwrap_or_default(), pulses })
    }

    /// Per-pulse unitaries paired with the factors they act on.
    pub fn compile(&self, scheme: &IonLevelScheme) -> Result<Vec<(ComplexMatrix, [usize; 2])>> {
        self.pulses.iter().map(|p| Ok((p.unitary(scheme)?, p.factors()))).collect()
    }
}

impl fmt::Display for PulseProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.label)?;
        for p in &self.pulses {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

const RY: f64 = -FRAC_PI_2;
const RX: f64 = 0.0;

fn anc(l: A) -> usize {
    l as usize
}

fn tgt(l: T) -> usize {
    l as usize
}

/// Pulse sequence of the protocol: three preparation rotations, the three
/// phonon-mediated controlled operations and the four closing rotations.
pub fn compile_protocol() -> PulseProgram {
    let [t1, t2, t3] = gate::preparation_angles();
    let p = |r: Result<Pulse>| r.expect("static pulse definition");
    let ancilla = Ion::Ancilla;
    let target = Ion::Target;
    // 2π red pulse on g_q ↔ e_aux: phase flip of |g_q, 1⟩
    let phase_flip = || p(Pulse::red(target, tgt(T::G), tgt(T::Aux), 2.0 * PI));

    let pulses = vec![
        // preparation
        p(Pulse::carrier(ancilla, anc(A::G), anc(A::E), t1, RY)),
        p(Pulse::raman(ancilla, anc(A::G), anc(A::Gp), t2, RY)),
        p(Pulse::carrier(ancilla, anc(A::Gp), anc(A::Ep), t3, RY)),
        // σy on the target, controlled by G'
        p(Pulse::blue(ancilla, anc(A::Gp), anc(A::Ep), PI)),
        p(Pulse::carrier(target, tgt(T::G), tgt(T::E), -FRAC_PI_2, RX)),
        phase_flip(),
        p(Pulse::carrier(target, tgt(T::G), tgt(T::E), FRAC_PI_2, RX)),
        p(Pulse::blue(ancilla, anc(A::Gp), anc(A::Ep), PI)),
        // σx on the target, controlled by E
        p(Pulse::red(ancilla, anc(A::G), anc(A::E), PI)),
        p(Pulse::carrier(target, tgt(T::G), tgt(T::E), FRAC_PI_2, RY)),
        phase_flip(),
        p(Pulse::carrier(target, tgt(T::G), tgt(T::E), -FRAC_PI_2, RY)),
        p(Pulse::red(ancilla, anc(A::G), anc(A::E), PI)),
        // −σz on the target, controlled by E'
        p(Pulse::red(ancilla, anc(A::Gp), anc(A::Ep), PI)),
        phase_flip(),
        p(Pulse::red(ancilla, anc(A::Gp), anc(A::Ep), PI)),
        // closing rotations
        p(Pulse::carrier(ancilla, anc(A::G), anc(A::E), FRAC_PI_2, RY)),
        p(Pulse::carrier(ancilla, anc(A::Gp), anc(A::Ep), FRAC_PI_2, RY)),
        p(Pulse::raman(ancilla, anc(A::G), anc(A::Gp), FRAC_PI_2, RY)),
        p(Pulse::carrier(ancilla, anc(A::E), anc(A::Ep), FRAC_PI_2, RY)),
    ];
    PulseProgram::new("concurrence protocol", pulses)
}

/// Number of leading pulses of [`compile_protocol`] that prepare the ancilla.
pub const PREPARATION_PULSES: usize = 3;

/// Result of running a pulse program.
#[derive(Clone, Debug, PartialEq)]
pub struct Execution {
    pub state: StateVector,
    /// Largest population seen outside the `{|0⟩, |1⟩}` phonon manifold.
    pub leakage: f64,
    /// Norm after each pulse.
    pub norms: Vec<f64>,
}

impl Execution {
    pub fn is_valid(&self) -> bool {
        self.leakage <= tol::LEAKAGE
    }

    /// Population outside the phonon ground state.
    pub fn phonon_excitation(&self) -> f64 {
        let m = self.state.marginal(PHONON).expect("phonon factor present");
        m[1..].iter().sum()
    }
}

fn leakage_of(state: &StateVector) -> f64 {
    let m = state.marginal(PHONON).expect("phonon factor present");
    m.iter().skip(2).sum()
}

/// Applies the pulses of `program` in order to `initial`, whose factors must
/// be [`IonLevelScheme::dims`].
pub fn execute(program: &PulseProgram, initial: &StateVector, scheme: &IonLevelScheme) -> Result<Execution> {
    if initial.dims() != scheme.dims() {
        return Err(Error::Dimension(format!(
            "state factors {:?} do not match level scheme {:?}",
            initial.dims(),
            scheme.dims()
        )));
    }
    let n = initial.norm();
    if (n - 1.0).abs() > tol::INPUT_NORM {
        return Err(Error::NotNormalized(n));
    }
    execute_compiled(&program.compile(scheme)?, initial)
}

pub(crate) fn execute_compiled(ops: &[(ComplexMatrix, [usize; 2])], initial: &StateVector) -> Result<Execution> {
    let mut state = initial.clone();
    let mut leakage = leakage_of(&state);
    let mut norms = Vec::with_capacity(ops.len());
    for (u, factors) in ops {
        state.apply_local(u, factors)?;
        leakage = leakage.max(leakage_of(&state));
        norms.push(state.norm());
    }
    Ok(Execution { state, leakage, norms })
}

/// `|G⟩ ⊗ |χ⟩ ⊗ |0⟩_phonon` laid out as `[ancilla, target, phonon,
/// spectator]`, with `χ` in the basis order `(gg, ge, eg, ee)`.
pub fn initial_state(chi: &StateVector, scheme: &IonLevelScheme) -> Result<StateVector> {
    gate::check_two_qubit(chi)?;
    let mut anc = vec![C64::new(0.0, 0.0); 4];
    anc[AncillaLevel::G.index()] = C64::new(1.0, 0.0);
    embed_gate_amplitudes(&StateVector::new(vec![4], anc)?.tensor(chi), scheme)
}

/// Embeds a gate-level `[4, 2, 2]` state into the pulse-level space with the
/// phonon in `|0⟩`.
pub fn embed_gate_amplitudes(gate_state: &StateVector, scheme: &IonLevelScheme) -> Result<StateVector> {
    if gate_state.dims() != gate::DIMS {
        return Err(Error::Dimension(format!("gate-level factors expected, got {:?}", gate_state.dims())));
    }
    let dims = scheme.dims();
    let mut amps = vec![C64::new(0.0, 0.0); dims.iter().product()];
    let src = gate_state.amplitudes();
    for a in 0..4 {
        for t in 0..2 {
            for s in 0..2 {
                let dst = ((a * dims[1] + t) * dims[2]) * dims[3] + s;
                amps[dst] = src[(a * 2 + t) * 2 + s];
            }
        }
    }
    StateVector::new(dims.to_vec(), amps)
}

/// Pulse-level run of the protocol on `χ`, compared with the gate model.
#[derive(Clone, Debug)]
pub struct PulseRun {
    pub execution: Execution,
    /// `|⟨ψ_gate ⊗ 0_phonon | ψ_pulse⟩|`.
    pub fidelity: f64,
}

pub fn run_pulse_protocol(chi: &StateVector, scheme: &IonLevelScheme) -> Result<PulseRun> {
    let init = initial_state(chi, scheme)?;
    let execution = execute(&compile_protocol(), &init, scheme)?;
    let gate_final = gate::run_protocol(chi)?;
    let fidelity = gate_fidelity(&gate_final, &execution.state, scheme)?;
    Ok(PulseRun { execution, fidelity })
}

pub fn gate_fidelity(gate_state: &ProtocolState, pulse_state: &StateVector, scheme: &IonLevelScheme) -> Result<f64> {
    embed_gate_amplitudes(gate_state.state(), scheme)?.overlap(pulse_state)
}
