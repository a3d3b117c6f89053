use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::{subspace_pauli, Axis};
use crate::linalg::{matrix_exponential, ComplexMatrix, C64};

use super::levels::{Ion, IonLevelScheme, PHONON};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PulseKind {
    /// Resonant with the bare electronic transition.
    Carrier,
    /// Resonant with the first lower motional sideband (`σ₊a`).
    Red,
    /// Resonant with the first upper motional sideband (`σ₊a†`).
    Blue,
    /// Two-photon carrier between levels of the same parity, modelled as an
    /// effective carrier.
    Raman,
}

impl PulseKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Carrier => "carrier",
            Self::Red => "red",
            Self::Blue => "blue",
            Self::Raman => "raman",
        }
    }

    pub fn is_sideband(self) -> bool {
        matches!(self, Self::Red | Self::Blue)
    }
}

impl FromStr for PulseKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "carrier" => Ok(Self::Carrier),
            "red" => Ok(Self::Red),
            "blue" => Ok(Self::Blue),
            "raman" => Ok(Self::Raman),
            other => Err(format!("unknown pulse kind `{other}`")),
        }
    }
}

/// Pulse area `θ` from physical parameters: `|Ω|τ` for carrier-type pulses,
/// `η|Ω|τ` for sidebands.
pub fn pulse_area(kind: PulseKind, lamb_dicke: f64, rabi: f64, duration: f64) -> f64 {
    if kind.is_sideband() {
        lamb_dicke * rabi.abs() * duration
    } else {
        rabi.abs() * duration
    }
}

/// One laser pulse on one transition of one ion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    pub ion: Ion,
    pub kind: PulseKind,
    pub lower: usize,
    pub upper: usize,
    /// Pulse area in radians.
    pub theta: f64,
    /// Laser phase in radians; always 0 for sidebands.
    pub phi: f64,
}

impl Pulse {
    pub fn new(ion: Ion, kind: PulseKind, lower: usize, upper: usize, theta: f64, phi: f64) -> Result<Self> {
        let n = ion.num_levels();
        for l in [lower, upper] {
            if l >= n {
                return Err(Error::LevelOutOfRange { index: l, dim: n });
            }
        }
        if lower == upper {
            return Err(Error::SameLevel(lower));
        }
        if kind.is_sideband() && phi != 0.0 {
            return Err(Error::InvalidArgument(format!("sideband pulses use phase 0, got {phi}")));
        }
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidArgument("non-finite pulse angle".into()));
        }
        Ok(Self { ion, kind, lower, upper, theta, phi })
    }

    pub fn carrier(ion: Ion, lower: usize, upper: usize, theta: f64, phi: f64) -> Result<Self> {
        Self::new(ion, PulseKind::Carrier, lower, upper, theta, phi)
    }

    pub fn raman(ion: Ion, lower: usize, upper: usize, theta: f64, phi: f64) -> Result<Self> {
        Self::new(ion, PulseKind::Raman, lower, upper, theta, phi)
    }

    pub fn red(ion: Ion, lower: usize, upper: usize, theta: f64) -> Result<Self> {
        Self::new(ion, PulseKind::Red, lower, upper, theta, 0.0)
    }

    pub fn blue(ion: Ion, lower: usize, upper: usize, theta: f64) -> Result<Self> {
        Self::new(ion, PulseKind::Blue, lower, upper, theta, 0.0)
    }

    /// The pulse that undoes this one.
    pub fn inverse(&self) -> Self {
        Self { theta: -self.theta, ..*self }
    }

    /// Unitary on `ion levels ⊗ phonon`.
    pub fn unitary(&self, scheme: &IonLevelScheme) -> Result<ComplexMatrix> {
        match self.kind {
            PulseKind::Carrier | PulseKind::Raman => {
                carrier_unitary(self.theta, self.phi, self.ion, self.lower, self.upper, scheme)
            }
            PulseKind::Red | PulseKind::Blue => {
                sideband_unitary(self.kind, self.theta, self.ion, self.lower, self.upper, scheme)
            }
        }
    }

    /// State factors the unitary acts on, in matrix order.
    pub fn factors(&self) -> [usize; 2] {
        [self.ion.factor(), PHONON]
    }
}

impl fmt::Display for Pulse {
    /// `ion kind lower upper theta phi`, angles with 12 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {:.11e} {:.11e}",
            self.ion,
            self.kind.name(),
            self.ion.level_name(self.lower).unwrap_or("?"),
            self.ion.level_name(self.upper).unwrap_or("?"),
            self.theta,
            self.phi
        )
    }
}

impl FromStr for Pulse {
    type Err = String;

    fn from_str(line: &str) -> std::result::Result<Self, String> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [ion, kind, lower, upper, theta, phi] = fields[..] else {
            return Err(format!("expected 6 fields, found {}", fields.len()));
        };
        let ion = match ion {
            "ancilla" => Ion::Ancilla,
            "target" => Ion::Target,
            other => return Err(format!("unknown ion `{other}`")),
        };
        let kind: PulseKind = kind.parse()?;
        let level = |name: &str| ion.level_index(name).ok_or_else(|| format!("unknown {ion} level `{name}`"));
        let angle = |s: &str| s.parse::<f64>().map_err(|e| format!("bad angle `{s}`: {e}"));
        Pulse::new(ion, kind, level(lower)?, level(upper)?, angle(theta)?, angle(phi)?).map_err(|e| e.to_string())
    }
}

fn check_pair(ion: Ion, lower: usize, upper: usize) -> Result<()> {
    let n = ion.num_levels();
    for l in [lower, upper] {
        if l >= n {
            return Err(Error::LevelOutOfRange { index: l, dim: n });
        }
    }
    if lower == upper {
        return Err(Error::SameLevel(lower));
    }
    Ok(())
}

/// `exp(−iθ/2 (cos φ σx − sin φ σy))` on the `(lower, upper)` block of the
/// ion, identity on the other levels and on the phonon mode.
///
/// `φ = 0` gives `R_x(θ)`, `φ = −π/2` gives `R_y(θ)`.
pub fn carrier_unitary(
    theta: f64,
    phi: f64,
    ion: Ion,
    lower: usize,
    upper: usize,
    scheme: &IonLevelScheme,
) -> Result<ComplexMatrix> {
    check_pair(ion, lower, upper)?;
    let n = ion.num_levels();
    let sx = subspace_pauli(Axis::X, lower, upper, n)?;
    let sy = subspace_pauli(Axis::Y, lower, upper, n)?;
    let generator = &sx.scale_real(phi.cos()) - &sy.scale_real(phi.sin());
    let u = matrix_exponential(&generator, C64::new(0.0, -theta / 2.0))?;
    u.kron(&ComplexMatrix::identity(scheme.fock_cutoff()))
}

/// Annihilation operator on the truncated Fock space.
fn annihilation(cutoff: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Sideband generator `(i/2)(σ₊ b − σ₋ b†)` with `b = a` (red) or `a†`
/// (blue), on `ion levels ⊗ phonon`.
fn sideband_generator(kind: PulseKind, ion: Ion, lower: usize, upper: usize, cutoff: usize) -> Result<ComplexMatrix> {
    let n = ion.num_levels();
    let raise = ComplexMatrix::outer_basis(n, upper, lower);
    let a = annihilation(cutoff);
    let b = match kind {
        PulseKind::Red => a,
        PulseKind::Blue => a.dagger(),
        other => return Err(Error::InvalidArgument(format!("{} is not a sideband", other.name()))),
    };
    let forward = raise.kron(&b)?;
    let half_i = C64::new(0.0, 0.5);
    Ok(&forward.scale(half_i) + &forward.dagger().scale(-half_i))
}

/// `exp(−iθ H)` for the red or blue sideband generator `H`, with the area
/// `θ = η|Ω|t` calibrated to the `n = 0 ↔ 1` transition; the `n ↔ n±1`
/// blocks rotate `√n` times faster.
///
/// A red π pulse sends `|upper, 0⟩ → −|lower, 1⟩`; a blue π pulse sends
/// `|lower, 0⟩ → |upper, 1⟩`.
pub fn sideband_unitary(
    kind: PulseKind,
    theta: f64,
    ion: Ion,
    lower: usize,
    upper: usize,
    scheme: &IonLevelScheme,
) -> Result<ComplexMatrix> {
    check_pair(ion, lower, upper)?;
    let h = sideband_generator(kind, ion, lower, upper, scheme.fock_cutoff())?;
    matrix_exponential(&h, C64::new(0.0, -theta))
}

/// Excitation number conserved by a sideband: `n + |upper⟩⟨upper|` for red,
/// `n − |upper⟩⟨upper|` for blue.
pub fn excitation_number(kind: PulseKind, ion: Ion, upper: usize, cutoff: usize) -> ComplexMatrix {
    let n_levels = ion.num_levels();
    let number = ComplexMatrix::diagonal(&(0..cutoff).map(|k| C64::new(k as f64, 0.0)).collect::<Vec<_>>());
    let phonons = ComplexMatrix::identity(n_levels).kron(&number).expect("small");
    let upper_proj =
        ComplexMatrix::outer_basis(n_levels, upper, upper).kron(&ComplexMatrix::identity(cutoff)).expect("small");
    match kind {
        PulseKind::Blue => &phonons - &upper_proj,
        _ => &phonons + &upper_proj,
    }
}
