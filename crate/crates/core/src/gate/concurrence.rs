use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{partial_trace, pauli, ComplexMatrix, DensityMatrix, StateVector, C64};

use super::check_two_qubit;
use super::povm::{concurrence_from_probabilities, probabilities_from_density, BlochVector};

/// `C = √(4 det ρ_q)` with `ρ_q` the reduced state of the first qubit.
pub fn concurrence_oracle(chi: &StateVector) -> Result<f64> {
    check_two_qubit(chi)?;
    let rho_q = chi.normalized()?.reduced(&[0])?;
    Ok((4.0 * rho_q.determinant()).max(0.0).sqrt())
}

/// `C = 2|ad − bc|` for `χ = a|gg⟩ + b|ge⟩ + c|eg⟩ + d|ee⟩`.
pub fn concurrence_amplitude(chi: &StateVector) -> Result<f64> {
    check_two_qubit(chi)?;
    let [a, b, c, d]: [C64; 4] = chi.amplitudes().try_into().expect("four amplitudes");
    Ok(2.0 * (a * d - b * c).norm())
}

/// Bloch vector of the first (target) qubit of a two-qubit density matrix.
pub fn bloch_of_target(rho: &DensityMatrix) -> Result<BlochVector> {
    BlochVector::of_density(&partial_trace(rho, &[2, 2], 0)?)
}

/// Wootters concurrence `max(0, μ₁ − μ₂ − μ₃ − μ₄)` where `μᵢ²` are the
/// eigenvalues of `√ρ ρ̃ √ρ`, `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::Dimension(format!("two-qubit density matrix expected, got dim {}", rho.dim())));
    }
    let yy = pauli::y().kron(&pauli::y())?;
    let m = rho.matrix();
    let conj = ComplexMatrix::from_fn(4, 4, |i, j| m[(i, j)].conj());
    let tilde = &(&yy * &conj) * &yy;

    let (vals, vecs) = m.hermitian_eigen()?;
    let roots: Vec<C64> = vals.iter().map(|&v| C64::new(v.max(0.0).sqrt(), 0.0)).collect();
    let sqrt_rho = &(&vecs * &ComplexMatrix::diagonal(&roots)) * &vecs.dagger();
    let r = &(&sqrt_rho * &tilde) * &sqrt_rho;
    // symmetrize away rounding before the Hermitian eigensolve
    let r = (&r + &r.dagger()).scale_real(0.5);
    let mut mu: Vec<f64> = r.hermitian_eigenvalues()?.into_iter().map(|v| v.max(0.0).sqrt()).collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).max(0.0))
}

/// Squared concurrence the protocol reports when fed a (possibly mixed)
/// two-qubit state: the four populations are computed from the target-qubit
/// reduction and substituted into `4(1 − 3ΣP²)`.
pub fn reported_concurrence_squared(rho: &DensityMatrix) -> Result<f64> {
    let p = probabilities_from_density(&partial_trace(rho, &[2, 2], 0)?)?;
    Ok(concurrence_from_probabilities(&p).squared_raw)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!("mixing weight {lambda} outside [0, 1]")));
    }
    Ok(())
}

/// Leading-order prediction `−2λ(1 − P·P′)` for `C²_true − C²_reported` on
/// `ρ = λρ′ + (1 − λ)|χ⟩⟨χ|`, with `P`, `P′` the target-qubit Bloch vectors
/// of `|χ⟩` and `ρ′`.
///
/// `rho_prime` should be separable; the caller is responsible for that.
pub fn mixed_state_bias(rho_prime: &DensityMatrix, chi: &StateVector, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    check_two_qubit(chi)?;
    let p = bloch_of_target(&chi.density()?)?;
    let p_prime = bloch_of_target(rho_prime)?;
    Ok(-2.0 * lambda * (1.0 - p.dot(&p_prime)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasReport {
    pub lambda: f64,
    /// Wootters `C²` of the mixture.
    pub true_squared: f64,
    /// `C²` the protocol reports for the mixture.
    pub reported_squared: f64,
    /// `true_squared − reported_squared`.
    pub actual: f64,
    pub predicted: f64,
    /// `actual − predicted`; second order in `λ`.
    pub residual: f64,
}

/// Compares the exact `C²_true − C²_reported` on the mixture with the
/// leading-order prediction.
pub fn mixed_state_residual(rho_prime: &DensityMatrix, chi: &StateVector, lambda: f64) -> Result<BiasReport> {
    let predicted = mixed_state_bias(rho_prime, chi, lambda)?;
    let rho = DensityMatrix::mix(lambda, rho_prime, &chi.density()?)?;
    let true_squared = wootters_concurrence(&rho)?.powi(2);
    let reported_squared = reported_concurrence_squared(&rho)?;
    let actual = true_squared - reported_squared;
    Ok(BiasReport { lambda, true_squared, reported_squared, actual, predicted, residual: actual - predicted })
}
