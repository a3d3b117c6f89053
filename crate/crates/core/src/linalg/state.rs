use crate::error::{Error, Result};

use super::{ComplexMatrix, DensityMatrix, C64};

/// Pure state on a tensor product of finite-dimensional factors.
///
/// Amplitudes are stored row-major in the factor order: the last factor
/// varies fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Dimension(format!("invalid factor dimensions {dims:?}")));
        }
        let total: usize = dims.iter().product();
        if total != amps.len() {
            return Err(Error::Dimension(format!("{} amplitudes for factor dimensions {dims:?}", amps.len())));
        }
        Ok(Self { dims, amps })
    }

    /// Product basis state `|i₀⟩⊗|i₁⟩⊗…`.
    pub fn basis(dims: &[usize], levels: &[usize]) -> Result<Self> {
        if dims.len() != levels.len() {
            return Err(Error::Dimension("one level per factor required".into()));
        }
        for (&l, &d) in levels.iter().zip(dims) {
            if l >= d {
                return Err(Error::LevelOutOfRange { index: l, dim: d });
            }
        }
        let total: usize = dims.iter().product();
        let mut amps = vec![C64::new(0.0, 0.0); total];
        let idx = levels.iter().zip(dims).fold(0, |acc, (&l, &d)| acc * d + l);
        amps[idx] = C64::new(1.0, 0.0);
        Self::new(dims.to_vec(), amps)
    }

    /// Haar-random pure state: i.i.d. complex Gaussian amplitudes, normalized.
    pub fn random<R: rand::Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<Self> {
        let total: usize = dims.iter().product();
        let amps = (0..total)
            .map(|_| C64::new(rng.sample(rand_distr::StandardNormal), rng.sample(rand_distr::StandardNormal)))
            .collect();
        Self::new(dims.to_vec(), amps)?.normalized()
    }

    /// `self ⊗ other`, concatenating the factor lists.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let amps = self.amps.iter().flat_map(|&a| other.amps.iter().map(move |&b| a * b)).collect();
        let dims = self.dims.iter().chain(&other.dims).copied().collect();
        StateVector { dims, amps }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { dims: self.dims.clone(), amps: self.amps.iter().map(|a| a / n).collect() })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dims != other.dims {
            return Err(Error::Dimension(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    fn check_factors(&self, factors: &[usize]) -> Result<usize> {
        let mut seen = vec![false; self.dims.len()];
        for &f in factors {
            if f >= self.dims.len() || seen[f] {
                return Err(Error::Dimension(format!("invalid factor list {factors:?} for {:?}", self.dims)));
            }
            seen[f] = true;
        }
        Ok(factors.iter().map(|&f| self.dims[f]).product())
    }

    /// Offsets of every sub-index of `factors` (first listed factor most
    /// significant) and the base offsets of the complementary factors.
    fn local_layout(&self, factors: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let strides = self.strides();
        let mut sub = vec![0usize];
        for &f in factors {
            let s = strides[f];
            sub = sub.iter().flat_map(|&o| (0..self.dims[f]).map(move |l| o + l * s)).collect();
        }
        let mut bases = vec![0usize];
        for (k, &d) in self.dims.iter().enumerate() {
            if factors.contains(&k) {
                continue;
            }
            let s = strides[k];
            bases = bases.iter().flat_map(|&o| (0..d).map(move |l| o + l * s)).collect();
        }
        (sub, bases)
    }

    /// Applies `op` to the listed factors (in the listed order) and the
    /// identity elsewhere.
    pub fn apply_local(&mut self, op: &ComplexMatrix, factors: &[usize]) -> Result<()> {
        let d = self.check_factors(factors)?;
        if op.rows() != d || op.cols() != d {
            return Err(Error::Dimension(format!(
                "{}x{} operator on factors {factors:?} of dimension {d}",
                op.rows(),
                op.cols()
            )));
        }
        let (sub, bases) = self.local_layout(factors);
        let mut buf = vec![C64::new(0.0, 0.0); d];
        for base in bases {
            for (b, &o) in buf.iter_mut().zip(&sub) {
                *b = self.amps[base + o];
            }
            let out = op.apply(&buf)?;
            for (v, &o) in out.into_iter().zip(&sub) {
                self.amps[base + o] = v;
            }
        }
        Ok(())
    }

    /// Applies a full-space operator.
    pub fn apply(&mut self, op: &ComplexMatrix) -> Result<()> {
        self.amps = op.apply(&self.amps)?;
        Ok(())
    }

    /// Occupation probabilities of each level of one factor.
    pub fn marginal(&self, factor: usize) -> Result<Vec<f64>> {
        self.check_factors(&[factor])?;
        let (sub, bases) = self.local_layout(&[factor]);
        let mut p = vec![0.0; self.dims[factor]];
        for base in bases {
            for (pl, &o) in p.iter_mut().zip(&sub) {
                *pl += self.amps[base + o].norm_sqr();
            }
        }
        Ok(p)
    }

    /// Zeroes every amplitude whose `factor` level is not in `keep`, leaving
    /// the state unnormalized. Returns the retained probability.
    pub fn project(&mut self, factor: usize, keep: &[usize]) -> Result<f64> {
        self.check_factors(&[factor])?;
        let (sub, bases) = self.local_layout(&[factor]);
        for base in bases {
            for (level, &o) in sub.iter().enumerate() {
                if !keep.contains(&level) {
                    self.amps[base + o] = C64::new(0.0, 0.0);
                }
            }
        }
        Ok(self.amps.iter().map(|a| a.norm_sqr()).sum())
    }

    /// Reduced density matrix of the listed factors (in the listed order).
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let d = self.check_factors(keep)?;
        let (sub, bases) = self.local_layout(keep);
        let mut rho = ComplexMatrix::zeros(d, d);
        for base in bases {
            for (i, &oi) in sub.iter().enumerate() {
                let a = self.amps[base + oi];
                for (j, &oj) in sub.iter().enumerate() {
                    rho[(i, j)] += a * self.amps[base + oj].conj();
                }
            }
        }
        DensityMatrix::new(rho)
    }

    /// `|ψ⟩⟨ψ|` on the full space.
    pub fn density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(ComplexMatrix::outer(&self.amps, &self.amps))
    }
}
