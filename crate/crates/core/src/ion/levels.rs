use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::AncillaLevel;

/// Which ion a pulse addresses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ion {
    Ancilla,
    Target,
}

/// Electronic levels of the ancilla ion.
///
/// The first four coincide with [`AncillaLevel`]; the remaining four are the
/// shelving slots used during readout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AncillaIonLevel {
    /// 4S1/2, m = −1/2
    G = 0,
    /// 4S1/2, m = +1/2
    Gp = 1,
    /// 3D3/2, m = +3/2
    E = 2,
    /// 3D3/2, m = −3/2
    Ep = 3,
    /// 3D5/2, m = +3/2
    D5a = 4,
    /// 3D5/2, m = −3/2
    D5b = 5,
    /// 3D5/2, m = +1/2
    D5c = 6,
    /// 3D3/2, m = +3/2, used to park `G` while `E` is elsewhere
    D3aux = 7,
}

impl AncillaIonLevel {
    pub const ALL: [AncillaIonLevel; 8] =
        [Self::G, Self::Gp, Self::E, Self::Ep, Self::D5a, Self::D5b, Self::D5c, Self::D3aux];

    pub fn name(self) -> &'static str {
        match self {
            Self::G => "G",
            Self::Gp => "Gp",
            Self::E => "E",
            Self::Ep => "Ep",
            Self::D5a => "D5a",
            Self::D5b => "D5b",
            Self::D5c => "D5c",
            Self::D3aux => "D3aux",
        }
    }

    /// Levels in the 4S1/2 manifold fluoresce on the detection transition.
    pub fn is_bright(self) -> bool {
        matches!(self, Self::G | Self::Gp)
    }
}

impl From<AncillaLevel> for AncillaIonLevel {
    fn from(l: AncillaLevel) -> Self {
        Self::ALL[l.index()]
    }
}

/// Electronic levels of the target ion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TargetLevel {
    /// qubit `|g⟩`
    G = 0,
    /// qubit `|e⟩`
    E = 1,
    /// auxiliary level reached only by the red-sideband phase pulse
    Aux = 2,
}

impl TargetLevel {
    pub const ALL: [TargetLevel; 3] = [Self::G, Self::E, Self::Aux];

    pub fn name(self) -> &'static str {
        match self {
            Self::G => "g_q",
            Self::E => "e_q",
            Self::Aux => "e_aux",
        }
    }
}

impl Ion {
    pub fn num_levels(self) -> usize {
        match self {
            Ion::Ancilla => AncillaIonLevel::ALL.len(),
            Ion::Target => TargetLevel::ALL.len(),
        }
    }

    /// Factor index of this ion in the pulse-level state.
    pub fn factor(self) -> usize {
        match self {
            Ion::Ancilla => ANCILLA_ION,
            Ion::Target => TARGET_ION,
        }
    }

    pub fn level_name(self, index: usize) -> Option<&'static str> {
        match self {
            Ion::Ancilla => AncillaIonLevel::ALL.get(index).map(|l| l.name()),
            Ion::Target => TargetLevel::ALL.get(index).map(|l| l.name()),
        }
    }

    pub fn level_index(self, name: &str) -> Option<usize> {
        (0..self.num_levels()).find(|&i| self.level_name(i) == Some(name))
    }

    pub fn name(self) -> &'static str {
        match self {
            Ion::Ancilla => "ancilla",
            Ion::Target => "target",
        }
    }
}

impl fmt::Display for Ion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub const ANCILLA_ION: usize = 0;
pub const TARGET_ION: usize = 1;
pub const PHONON: usize = 2;
pub const SPECTATOR: usize = 3;

pub const DEFAULT_FOCK_CUTOFF: usize = 3;

/// Level structure of the two ions and the truncation of the motional mode.
///
/// `fock_cutoff` is the number of retained Fock states `|0⟩…|fock_cutoff−1⟩`.
/// The protocol only ever populates `|0⟩` and `|1⟩`; anything above is
/// reported as leakage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IonLevelScheme {
    fock_cutoff: usize,
}

impl IonLevelScheme {
    pub fn new(fock_cutoff: usize) -> Result<Self> {
        if fock_cutoff < 2 {
            return Err(Error::InvalidArgument(format!("fock cutoff {fock_cutoff} below the minimum of 2")));
        }
        Ok(Self { fock_cutoff })
    }

    pub fn fock_cutoff(&self) -> usize {
        self.fock_cutoff
    }

    /// Factor dimensions `[ancilla ion, target ion, phonon, spectator qubit]`.
    /// The spectator qubit is carried along but never addressed.
    pub fn dims(&self) -> [usize; 4] {
        [Ion::Ancilla.num_levels(), Ion::Target.num_levels(), self.fock_cutoff, 2]
    }
}

impl Default for IonLevelScheme {
    fn default() -> Self {
        Self { fock_cutoff: DEFAULT_FOCK_CUTOFF }
    }
}
