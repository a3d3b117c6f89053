use crate::error::{Error, Result};
use crate::tol;

use super::{ComplexMatrix, C64};

/// Validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
        }
        let herm = m.hermiticity_defect();
        if herm > tol::NORMALIZATION {
            return Err(Error::InvalidDensity(format!("not Hermitian (defect {herm:.3e})")));
        }
        let tr = m.trace();
        if (tr - 1.0).norm() > tol::NORMALIZATION {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let min_eig = m.hermitian_eigenvalues()?[0];
        if min_eig < tol::MIN_EIGENVALUE {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(Self { m })
    }

    /// `λ a + (1 − λ) b`.
    pub fn mix(lambda: f64, a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidArgument(format!("mixing weight {lambda} outside [0, 1]")));
        }
        if a.dim() != b.dim() {
            return Err(Error::Dimension(format!("mixing {}-dim with {}-dim state", a.dim(), b.dim())));
        }
        Self::new(&a.m.scale_real(lambda) + &b.m.scale_real(1.0 - lambda))
    }

    /// `a ⊗ b`.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        Self::new(self.m.kron(&other.m)?)
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.m.hermitian_eigenvalues().expect("validated on construction")
    }

    pub fn determinant(&self) -> f64 {
        self.m.determinant().expect("square by construction").re
    }

    /// `Tr(ρ A)`.
    pub fn expectation(&self, a: &ComplexMatrix) -> Result<C64> {
        Ok(self.m.matmul(a)?.trace())
    }
}

/// Traces out every factor except `keep`.
pub fn partial_trace(rho: &DensityMatrix, factor_dims: &[usize], keep: usize) -> Result<DensityMatrix> {
    let total: usize = factor_dims.iter().product();
    if total != rho.dim() || factor_dims.contains(&0) {
        return Err(Error::Dimension(format!(
            "factor dimensions {factor_dims:?} do not match a {}-dim density matrix",
            rho.dim()
        )));
    }
    if keep >= factor_dims.len() {
        return Err(Error::Dimension(format!("factor {keep} of {}", factor_dims.len())));
    }
    // split indices as (outer, kept, inner)
    let dk = factor_dims[keep];
    let outer: usize = factor_dims[..keep].iter().product();
    let inner: usize = factor_dims[keep + 1..].iter().product();
    let m = rho.matrix();
    let mut red = ComplexMatrix::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for o in 0..outer {
                for n in 0..inner {
                    acc += m[((o * dk + i) * inner + n, (o * dk + j) * inner + n)];
                }
            }
            red[(i, j)] = acc;
        }
    }
    DensityMatrix::new(red)
}
