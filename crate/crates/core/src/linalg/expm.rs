use crate::error::{Error, Result};
use crate::tol;

use super::{ComplexMatrix, C64};

/// `exp(scale · h)` for a Hermitian `h`.
///
/// With `scale = −i t` this is the propagator of `h` over time `t` and the
/// result is unitary.
pub fn matrix_exponential(h: &ComplexMatrix, scale: C64) -> Result<ComplexMatrix> {
    if !h.is_square() {
        return Err(Error::NotSquare { rows: h.rows(), cols: h.cols() });
    }
    let defect = h.hermiticity_defect();
    if defect > tol::STRUCTURAL {
        return Err(Error::NotHermitian(defect));
    }
    expm(&h.scale(scale))
}

/// Matrix exponential of an arbitrary square matrix by scaling and squaring
/// with a truncated Taylor series.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    let norm = a.norm_one();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    // bring the norm under 1/2 so the series converges in a handful of terms
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a.scale_real(0.5_f64.powi(squarings));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=40 {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        sum = &sum + &term;
        if term.max_abs() < 1e-18 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}
