//! Electron-shelving readout of the ancilla.
//!
//! Mapping pulses first move `E`, `E'` and `G'` into distinct 3D5/2 slots
//! so that only `G` remains in the fluorescing 4S1/2 manifold. The cascade
//! then alternates fluorescence tests with unshelving pulses:
//! test (`G`), unshelve `G'`, test (`G'`), unshelve `E`, test (`E`), and
//! declares `E'` if all three tests were dark.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::{AncillaLevel, ProbVector};
use crate::linalg::{ComplexMatrix, StateVector};

use super::levels::{AncillaIonLevel as A, Ion, IonLevelScheme, ANCILLA_ION};
use super::program::PulseProgram;
use super::pulse::Pulse;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CascadeStep {
    /// Fluorescence test; a bright result identifies `level`.
    Test(AncillaLevel),
    /// Unshelving pulse applied after a dark result.
    Pulse(Pulse),
    /// Level declared when every test was dark.
    Eliminate(AncillaLevel),
}

/// Mapping pulses plus the conditional cascade.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Readout {
    pub mapping: PulseProgram,
    pub cascade: Vec<CascadeStep>,
}

impl fmt::Display for Readout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mapping)?;
        writeln!(f, "# cascade")?;
        for step in &self.cascade {
            match step {
                CascadeStep::Test(l) => writeln!(f, "# test bright -> {l}")?,
                CascadeStep::Pulse(p) => writeln!(f, "# if dark: {p}")?,
                CascadeStep::Eliminate(l) => writeln!(f, "# all dark -> {l}")?,
            }
        }
        Ok(())
    }
}

fn pi_pulse(kind: fn(Ion, usize, usize, f64, f64) -> Result<Pulse>, lower: A, upper: A) -> Pulse {
    kind(Ion::Ancilla, lower as usize, upper as usize, PI, 0.0).expect("static pulse definition")
}

pub fn compile_readout() -> Readout {
    let mapping = PulseProgram::new(
        "readout mapping",
        vec![
            // 3D3/2 → 3D5/2 Raman transfer of E and E'
            pi_pulse(Pulse::raman, A::E, A::D5a),
            pi_pulse(Pulse::raman, A::Ep, A::D5b),
            // park G, shelve G', bring G back
            pi_pulse(Pulse::carrier, A::G, A::D3aux),
            pi_pulse(Pulse::carrier, A::Gp, A::D5c),
            pi_pulse(Pulse::carrier, A::G, A::D3aux),
        ],
    );
    let cascade = vec![
        CascadeStep::Test(AncillaLevel::G),
        CascadeStep::Pulse(pi_pulse(Pulse::carrier, A::Gp, A::D5c)),
        CascadeStep::Test(AncillaLevel::Gp),
        CascadeStep::Pulse(pi_pulse(Pulse::carrier, A::G, A::D5a)),
        CascadeStep::Test(AncillaLevel::E),
        CascadeStep::Eliminate(AncillaLevel::Ep),
    ];
    Readout { mapping, cascade }
}

/// Outcome of one pass through the cascade.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FluorescenceOutcome {
    pub level_detected: AncillaLevel,
    /// Position of the deciding step: 1–3 for a bright test, 4 when the
    /// level was inferred from three dark tests.
    pub num_tests: u8,
}

fn bright_levels() -> Vec<usize> {
    A::ALL.iter().filter(|l| l.is_bright()).map(|&l| l as usize).collect()
}

fn dark_levels() -> Vec<usize> {
    A::ALL.iter().filter(|l| !l.is_bright()).map(|&l| l as usize).collect()
}

enum Step {
    Test(AncillaLevel),
    Pulse(ComplexMatrix, [usize; 2]),
    Eliminate(AncillaLevel),
}

/// Readout cascade with its unitaries built for a given level scheme.
pub struct CompiledCascade {
    steps: Vec<Step>,
}

impl CompiledCascade {
    pub fn new(readout: &Readout, scheme: &IonLevelScheme) -> Result<Self> {
        let steps = readout
            .cascade
            .iter()
            .map(|s| {
                Ok(match s {
                    CascadeStep::Test(l) => Step::Test(*l),
                    CascadeStep::Pulse(p) => Step::Pulse(p.unitary(scheme)?, p.factors()),
                    CascadeStep::Eliminate(l) => Step::Eliminate(*l),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { steps })
    }

    /// Born probabilities of the four cascade outcomes for a state that has
    /// already been through the mapping pulses.
    pub fn distribution(&self, state: &StateVector) -> Result<ProbVector> {
        let mut p = [0.0; 4];
        let mut dark = state.clone();
        let bright = bright_levels();
        let shelved = dark_levels();
        for step in &self.steps {
            match step {
                Step::Test(level) => {
                    let mut lit = dark.clone();
                    p[level.index()] = lit.project(ANCILLA_ION, &bright)?;
                    dark.project(ANCILLA_ION, &shelved)?;
                }
                Step::Pulse(u, factors) => dark.apply_local(u, factors)?,
                Step::Eliminate(level) => p[level.index()] = dark.norm().powi(2),
            }
        }
        Ok(ProbVector::from_array(p))
    }

    /// Samples one outcome by sequential projective bright/dark tests and
    /// returns it together with the collapsed, renormalized state.
    pub fn measure<R: Rng + ?Sized>(
        &self,
        state: &StateVector,
        rng: &mut R,
    ) -> Result<(FluorescenceOutcome, StateVector)> {
        let bright = bright_levels();
        let shelved = dark_levels();
        let mut current = state.normalized()?;
        let mut tests = 0u8;
        for step in &self.steps {
            match step {
                Step::Test(level) => {
                    tests += 1;
                    let mut lit = current.clone();
                    let p_bright = lit.project(ANCILLA_ION, &bright)?;
                    if rng.gen::<f64>() < p_bright {
                        let outcome = FluorescenceOutcome { level_detected: *level, num_tests: tests };
                        return Ok((outcome, lit.normalized()?));
                    }
                    current.project(ANCILLA_ION, &shelved)?;
                    current = current.normalized()?;
                }
                Step::Pulse(u, factors) => current.apply_local(u, factors)?,
                Step::Eliminate(level) => {
                    let outcome = FluorescenceOutcome { level_detected: *level, num_tests: tests + 1 };
                    return Ok((outcome, current));
                }
            }
        }
        Err(Error::InvalidArgument("cascade ended without a decision".into()))
    }
}

/// One seeded measurement of a mapped state.
pub fn measure_cascade(state: &StateVector, scheme: &IonLevelScheme, seed: u64) -> Result<FluorescenceOutcome> {
    let cascade = CompiledCascade::new(&compile_readout(), scheme)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(cascade.measure(state, &mut rng)?.0)
}
