//! Ideal gate-level protocol.
//!
//! The joint state lives on `ancilla (4) ⊗ target qubit (2) ⊗ spectator
//! qubit (2)`. The ancilla is prepared in a fixed superposition, three
//! ancilla-controlled Paulis act on the target qubit, and four `π/2`
//! rotations between ancilla levels leave the ancilla populations equal to
//! the outcome probabilities of a tetrahedral qubit POVM.

mod concurrence;
mod povm;

pub use concurrence::{
    bloch_of_target, concurrence_amplitude, concurrence_oracle, mixed_state_bias, mixed_state_residual,
    reported_concurrence_squared, wootters_concurrence, BiasReport,
};
pub use povm::{
    bloch_from_frequencies, bloch_from_probabilities, concurrence_from_probabilities, povm_elements,
    probabilities_from_bloch, probabilities_from_density, BlochVector, ConcurrenceReading, Povm, ProbVector,
};

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{matrix_exponential, pauli, ComplexMatrix, StateVector, C64};
use crate::tol;

/// Ancilla levels in their fixed project-wide order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AncillaLevel {
    G = 0,
    Gp = 1,
    E = 2,
    Ep = 3,
}

impl AncillaLevel {
    pub const ALL: [AncillaLevel; 4] = [Self::G, Self::Gp, Self::E, Self::Ep];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

impl fmt::Display for AncillaLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::G => "G",
            Self::Gp => "G'",
            Self::E => "E",
            Self::Ep => "E'",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Pauli operator on the two-dimensional subspace spanned by levels `j` and
/// `k` of a `dim`-level system, zero elsewhere.
///
/// `σx = |k⟩⟨j| + |j⟩⟨k|`, `σy = −i(|k⟩⟨j| − |j⟩⟨k|)`, `σz = |k⟩⟨k| − |j⟩⟨j|`.
pub fn subspace_pauli(axis: Axis, j: usize, k: usize, dim: usize) -> Result<ComplexMatrix> {
    for idx in [j, k] {
        if idx >= dim {
            return Err(Error::LevelOutOfRange { index: idx, dim });
        }
    }
    if j == k {
        return Err(Error::SameLevel(j));
    }
    let mut m = ComplexMatrix::zeros(dim, dim);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match axis {
        Axis::X => {
            m[(k, j)] = one;
            m[(j, k)] = one;
        }
        Axis::Y => {
            m[(k, j)] = -i;
            m[(j, k)] = i;
        }
        Axis::Z => {
            m[(k, k)] = one;
            m[(j, j)] = -one;
        }
    }
    Ok(m)
}

/// `exp(−iθσ/2)` on the `(j, k)` block, identity elsewhere.
///
/// For the `y` axis this sends `|j⟩ ↦ cos(θ/2)|j⟩ − sin(θ/2)|k⟩`.
pub fn subspace_rotation(axis: Axis, j: usize, k: usize, theta: f64, dim: usize) -> Result<ComplexMatrix> {
    let sigma = subspace_pauli(axis, j, k, dim)?;
    // σ vanishes off the block, so its exponential is already the identity there
    matrix_exponential(&sigma, C64::new(0.0, -theta / 2.0))
}

fn ancilla_rotation(axis: Axis, j: AncillaLevel, k: AncillaLevel, theta: f64) -> ComplexMatrix {
    subspace_rotation(axis, j.index(), k.index(), theta, 4).expect("distinct ancilla levels")
}

/// Rotation angles `(θ₁, θ₂, θ₃)` of the three preparation rotations
/// `R_y^{GE}(θ₁)`, `R_y^{GG'}(θ₂)`, `R_y^{G'E'}(θ₃)`.
pub fn preparation_angles() -> [f64; 3] {
    [-2.0 * (1.0 / 6.0_f64.sqrt()).asin(), -2.0 * (2.0_f64 / 5.0).sqrt().asin(), FRAC_PI_2]
}

/// The ancilla-level rotations of the preparation stage, in application
/// order.
pub fn preparation_rotations() -> [(AncillaLevel, AncillaLevel, f64); 3] {
    use AncillaLevel::*;
    let [t1, t2, t3] = preparation_angles();
    [(G, E, t1), (G, Gp, t2), (Gp, Ep, t3)]
}

/// The `π/2` rotations of the final stage, in application order.
pub fn final_rotations() -> [(AncillaLevel, AncillaLevel, f64); 4] {
    use AncillaLevel::*;
    [(G, E, FRAC_PI_2), (Gp, Ep, FRAC_PI_2), (G, Gp, FRAC_PI_2), (E, Ep, FRAC_PI_2)]
}

/// The three controlled operations `C^{G'}(σy)`, `C^E(σx)`, `C^{E'}(−σz)`.
pub fn controlled_operations() -> [(AncillaLevel, ComplexMatrix); 3] {
    [(AncillaLevel::Gp, pauli::y()), (AncillaLevel::E, pauli::x()), (AncillaLevel::Ep, pauli::z().scale_real(-1.0))]
}

/// Ancilla amplitudes after preparation, ordered `(G, G', E, E')`.
pub fn prepared_ancilla_amplitudes() -> [f64; 4] {
    let a = 1.0 / 2.0_f64.sqrt();
    let b = a / 3.0_f64.sqrt();
    [a, b, b, -b]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Initial,
    Prepared,
    Controlled,
    Final,
}

pub const ANCILLA: usize = 0;
pub const TARGET: usize = 1;
pub const SPECTATOR: usize = 2;
pub const DIMS: [usize; 3] = [4, 2, 2];

/// Joint ancilla ⊗ target ⊗ spectator state tagged with its protocol stage.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolState {
    state: StateVector,
    stage: Stage,
}

impl ProtocolState {
    /// `|G⟩ ⊗ |χ⟩` for a normalized two-qubit state `χ` in the basis order
    /// `(gg, ge, eg, ee)`, the first qubit being the target.
    pub fn new(chi: &StateVector) -> Result<Self> {
        check_two_qubit(chi)?;
        let state = StateVector::basis(&[4], &[AncillaLevel::G.index()])?.tensor(chi);
        Ok(Self { state, stage: Stage::Initial })
    }

    #[cfg(test)]
    pub(crate) fn from_parts(state: StateVector, stage: Stage) -> Self {
        Self { state, stage }
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    fn expect(&self, expected: Stage) -> Result<()> {
        if self.stage != expected {
            return Err(Error::WrongStage { expected, found: self.stage });
        }
        Ok(())
    }

    fn rotate(&mut self, rotations: &[(AncillaLevel, AncillaLevel, f64)]) -> Result<()> {
        for &(j, k, theta) in rotations {
            self.state.apply_local(&ancilla_rotation(Axis::Y, j, k, theta), &[ANCILLA])?;
        }
        Ok(())
    }

    /// Amplitudes of the target ⊗ spectator component attached to ancilla
    /// level `level` (unnormalized).
    pub fn branch(&self, level: AncillaLevel) -> StateVector {
        let amps = self.state.amplitudes()[level.index() * 4..level.index() * 4 + 4].to_vec();
        StateVector::new(vec![2, 2], amps).expect("four amplitudes")
    }
}

pub(crate) fn check_two_qubit(chi: &StateVector) -> Result<()> {
    if chi.dims() != [2, 2] {
        return Err(Error::Dimension(format!("two-qubit state expected, got factors {:?}", chi.dims())));
    }
    let n = chi.norm();
    if (n - 1.0).abs() > tol::INPUT_NORM {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

/// Applies the three preparation rotations to the ancilla.
pub fn prepare_ancilla(state: &ProtocolState) -> Result<ProtocolState> {
    state.expect(Stage::Initial)?;
    let mut next = state.clone();
    next.rotate(&preparation_rotations())?;
    next.stage = Stage::Prepared;
    Ok(next)
}

/// Applies `u` to the target qubit on the branch where the ancilla occupies
/// `control`.
pub fn controlled_unitary(state: &ProtocolState, control: AncillaLevel, u: &ComplexMatrix) -> Result<ProtocolState> {
    if u.rows() != 2 || u.cols() != 2 {
        return Err(Error::Dimension(format!("{}x{} target-qubit operator", u.rows(), u.cols())));
    }
    let defect = u.unitarity_defect();
    if defect > tol::STRUCTURAL {
        return Err(Error::NotUnitary(defect));
    }
    let op = controlled_operator(control, u)?;
    let mut next = state.clone();
    next.state.apply_local(&op, &[ANCILLA, TARGET])?;
    Ok(next)
}

/// `Σ_{A≠c} |A⟩⟨A| ⊗ I + |c⟩⟨c| ⊗ u` on ancilla ⊗ target.
fn controlled_operator(control: AncillaLevel, u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let c = control.index();
    let mut rest = ComplexMatrix::identity(4);
    rest[(c, c)] = C64::new(0.0, 0.0);
    let a = rest.kron(&ComplexMatrix::identity(2))?;
    let b = ComplexMatrix::outer_basis(4, c, c).kron(u)?;
    Ok(&a + &b)
}

pub fn run_controlled_stage(state: &ProtocolState) -> Result<ProtocolState> {
    state.expect(Stage::Prepared)?;
    let mut next = state.clone();
    for (control, u) in controlled_operations() {
        next = controlled_unitary(&next, control, &u)?;
    }
    next.stage = Stage::Controlled;
    Ok(next)
}

pub fn run_final_rotations(state: &ProtocolState) -> Result<ProtocolState> {
    state.expect(Stage::Controlled)?;
    let mut next = state.clone();
    next.rotate(&final_rotations())?;
    next.stage = Stage::Final;
    Ok(next)
}

/// Runs all three stages on `|G⟩|χ⟩`.
pub fn run_protocol(chi: &StateVector) -> Result<ProtocolState> {
    let s = ProtocolState::new(chi)?;
    let s = prepare_ancilla(&s)?;
    let s = run_controlled_stage(&s)?;
    run_final_rotations(&s)
}

/// Occupation probabilities of the four ancilla levels at the end of the
/// protocol.
pub fn ancilla_probabilities(state: &ProtocolState) -> Result<ProbVector> {
    state.expect(Stage::Final)?;
    let m = state.state.marginal(ANCILLA)?;
    Ok(ProbVector::from_array([m[0], m[1], m[2], m[3]]))
}

/// Full-space unitary of one stage, assembled as an explicit matrix product.
/// Used to cross-check the stage functions.
pub fn stage_unitary(stage: Stage) -> Result<ComplexMatrix> {
    let on_ancilla = |m: &ComplexMatrix| -> Result<ComplexMatrix> { m.kron(&ComplexMatrix::identity(4)) };
    let mut u = ComplexMatrix::identity(16);
    match stage {
        Stage::Initial => {}
        Stage::Prepared => {
            for (j, k, t) in preparation_rotations() {
                u = &on_ancilla(&ancilla_rotation(Axis::Y, j, k, t))? * &u;
            }
        }
        Stage::Controlled => {
            for (c, op) in controlled_operations() {
                u = &controlled_operator(c, &op)?.kron(&ComplexMatrix::identity(2))? * &u;
            }
        }
        Stage::Final => {
            for (j, k, t) in final_rotations() {
                u = &on_ancilla(&ancilla_rotation(Axis::Y, j, k, t))? * &u;
            }
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests;
