use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pauli, ComplexMatrix, DensityMatrix};
use crate::tol;

use super::AncillaLevel;

/// Tetrahedron directions attached to `(G, G', E, E')`.
pub const TETRAHEDRON: [[f64; 3]; 4] = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];

/// Occupation probabilities of the four ancilla levels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbVector {
    pub p_g: f64,
    pub p_gp: f64,
    pub p_e: f64,
    pub p_ep: f64,
}

impl ProbVector {
    pub fn from_array(p: [f64; 4]) -> Self {
        Self { p_g: p[0], p_gp: p[1], p_e: p[2], p_ep: p[3] }
    }

    pub fn uniform() -> Self {
        Self::from_array([0.25; 4])
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.p_g, self.p_gp, self.p_e, self.p_ep]
    }

    pub fn get(&self, level: AncillaLevel) -> f64 {
        self.as_array()[level.index()]
    }

    pub fn sum(&self) -> f64 {
        self.as_array().iter().sum()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.as_array().iter().map(|p| p * p).sum()
    }

    /// Checks each entry lies in `[0, 1]` and the total is 1, both within
    /// `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        for p in self.as_array() {
            if !(-tol..=1.0 + tol).contains(&p) || !p.is_finite() {
                return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
            }
        }
        let s = self.sum();
        if (s - 1.0).abs() > tol {
            return Err(Error::ProbabilitySum(s));
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &ProbVector) -> f64 {
        self.as_array().iter().zip(other.as_array()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Expectation values `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)` of one qubit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl BlochVector {
    pub fn new(sx: f64, sy: f64, sz: f64) -> Self {
        Self { sx, sy, sz }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.sx, self.sy, self.sz]
    }

    pub fn length(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.sx * other.sx + self.sy * other.sy + self.sz * other.sz
    }

    pub fn is_physical(&self) -> bool {
        self.dot(self) <= 1.0 + tol::NORMALIZATION
    }

    /// Bloch vector of a single-qubit density matrix.
    pub fn of_density(rho: &DensityMatrix) -> Result<Self> {
        if rho.dim() != 2 {
            return Err(Error::Dimension(format!("qubit density matrix expected, got dim {}", rho.dim())));
        }
        let [x, y, z] = pauli::all();
        Ok(Self::new(rho.expectation(&x)?.re, rho.expectation(&y)?.re, rho.expectation(&z)?.re))
    }

    pub fn max_abs_diff(&self, other: &BlochVector) -> f64 {
        self.as_array().iter().zip(other.as_array()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// The four Kraus-like operators `Q_A` and their squares, which form the
/// POVM effects.
#[derive(Clone, Debug)]
pub struct Povm {
    pub q: [ComplexMatrix; 4],
    pub effects: [ComplexMatrix; 4],
}

/// `Q_A = (I + n_A·σ/√3) / (2√2)` for the tetrahedron directions `n_A`.
pub fn povm_elements() -> Povm {
    let sigma = pauli::all();
    let q = TETRAHEDRON.map(|n| {
        let mut m = ComplexMatrix::identity(2);
        for (s, ni) in sigma.iter().zip(n) {
            m = &m + &s.scale_real(ni / 3.0_f64.sqrt());
        }
        m.scale_real(1.0 / (2.0 * 2.0_f64.sqrt()))
    });
    let effects = q.clone().map(|m| &m * &m);
    Povm { q, effects }
}

/// Forward map from a Bloch vector to the four level populations.
pub fn probabilities_from_bloch(b: &BlochVector) -> ProbVector {
    let s = b.as_array();
    ProbVector::from_array(TETRAHEDRON.map(|n| {
        let proj: f64 = n.iter().zip(s).map(|(a, b)| a * b).sum();
        0.25 * (1.0 + proj / 3.0_f64.sqrt())
    }))
}

/// Populations predicted by the POVM effects for a target-qubit density
/// matrix.
pub fn probabilities_from_density(rho: &DensityMatrix) -> Result<ProbVector> {
    let povm = povm_elements();
    let mut p = [0.0; 4];
    for (pa, e) in p.iter_mut().zip(&povm.effects) {
        *pa = rho.expectation(e)?.re;
    }
    Ok(ProbVector::from_array(p))
}

fn invert(p: &[f64; 4]) -> BlochVector {
    let r3 = 3.0_f64.sqrt();
    let comp = |axis: usize| r3 * (0..4).map(|a| TETRAHEDRON[a][axis] * p[a]).sum::<f64>();
    BlochVector::new(comp(0), comp(1), comp(2))
}

/// Linear inversion of the population map for exact probabilities.
pub fn bloch_from_probabilities(p: &ProbVector) -> Result<BlochVector> {
    let s = p.sum();
    if (s - 1.0).abs() > tol::PROB_SUM {
        return Err(Error::ProbabilitySum(s));
    }
    Ok(invert(&p.as_array()))
}

/// Linear inversion for sampled frequencies: the input is renormalized to
/// unit sum first.
pub fn bloch_from_frequencies(p: &ProbVector) -> Result<BlochVector> {
    let s = p.sum();
    if s <= 0.0 || !s.is_finite() {
        return Err(Error::ProbabilitySum(s));
    }
    Ok(invert(&p.as_array().map(|x| x / s)))
}

/// Concurrence read off the four populations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceReading {
    /// `C`, after clamping the radicand at zero.
    pub value: f64,
    /// `4(1 − 3ΣP²)` before clamping.
    pub squared_raw: f64,
    /// Set when the raw square was negative.
    pub clamped: bool,
}

pub fn concurrence_from_probabilities(p: &ProbVector) -> ConcurrenceReading {
    let squared_raw = 4.0 * (1.0 - 3.0 * p.sum_of_squares());
    let clamped = squared_raw < 0.0;
    ConcurrenceReading { value: squared_raw.max(0.0).sqrt(), squared_raw, clamped }
}
