//! Dense complex linear algebra for small composite Hilbert spaces.

mod density;
mod expm;
mod matrix;
mod state;

pub use density::{partial_trace, DensityMatrix};
pub use expm::{expm, matrix_exponential};
pub use matrix::ComplexMatrix;
pub use state::StateVector;

pub type C64 = num_complex::Complex64;

/// Single-qubit Pauli matrices in the basis `(|g⟩, |e⟩)`.
///
/// Signs follow the two-level convention used throughout the crate, with the
/// excited state as the "upper" level: `σz = |e⟩⟨e| − |g⟩⟨g|` and
/// `σy = −i(|e⟩⟨g| − |g⟩⟨e|)`.
pub mod pauli {
    use super::{ComplexMatrix, C64};

    const O: C64 = C64::new(0.0, 0.0);
    const ONE: C64 = C64::new(1.0, 0.0);
    const I: C64 = C64::new(0.0, 1.0);

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_rows([[O, ONE], [ONE, O]])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows([[O, I], [-I, O]])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_rows([[-ONE, O], [O, ONE]])
    }

    /// `(σx, σy, σz)`.
    pub fn all() -> [ComplexMatrix; 3] {
        [x(), y(), z()]
    }
}
