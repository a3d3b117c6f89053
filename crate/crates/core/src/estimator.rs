//! Finite-shot sampling of the ancilla populations and estimators of the
//! concurrence and Bloch vector built from the counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::{bloch_from_frequencies, BlochVector, ProbVector};
use crate::tol;

/// Outcome counts `(n_G, n_G', n_E, n_E')` of `shots` repetitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub counts: [u64; 4],
    pub shots: u64,
    pub seed: u64,
}

impl ShotRecord {
    pub fn new(counts: [u64; 4], seed: u64) -> Result<Self> {
        let shots = counts.iter().sum();
        if shots == 0 {
            return Err(Error::InvalidArgument("shot record with zero shots".into()));
        }
        Ok(Self { counts, shots, seed })
    }

    pub fn frequencies(&self) -> ProbVector {
        let n = self.shots as f64;
        ProbVector::from_array(self.counts.map(|c| c as f64 / n))
    }
}

/// Seeded generator used for every sampling routine.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Multinomial draw of `shots` outcomes from `p`, reproducible for a fixed
/// seed.
pub fn sample_counts(p: &ProbVector, shots: u64, seed: u64) -> Result<ShotRecord> {
    let mut rng = rng_from_seed(seed);
    let counts = draw_counts(p, shots, &mut rng)?;
    Ok(ShotRecord { counts, shots, seed })
}

/// Multinomial draw as a chain of conditional binomials.
pub fn draw_counts<R: Rng + ?Sized>(p: &ProbVector, shots: u64, rng: &mut R) -> Result<[u64; 4]> {
    if shots == 0 {
        return Err(Error::InvalidArgument("at least one shot is required".into()));
    }
    p.validate(tol::PROB_SUM)?;
    let probs = p.as_array().map(|x| x.max(0.0));
    let mut counts = [0u64; 4];
    let mut remaining = shots;
    let mut mass_left: f64 = probs.iter().sum();
    for i in 0..3 {
        if remaining == 0 || mass_left <= 0.0 {
            break;
        }
        let q = (probs[i] / mass_left).clamp(0.0, 1.0);
        let n = Binomial::new(remaining, q).expect("probability clamped to [0, 1]").sample(rng);
        counts[i] = n;
        remaining -= n;
        mass_left -= probs[i];
    }
    counts[3] += remaining;
    Ok(counts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorMethod {
    /// Empirical frequencies substituted directly.
    #[default]
    Plugin,
    /// `Σ n_A(n_A − 1) / (N(N − 1))` as an unbiased estimate of `ΣP²`.
    UnbiasedSumOfSquares,
}

impl std::str::FromStr for EstimatorMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "plugin" => Ok(Self::Plugin),
            "unbiased" | "unbiased_sum_of_squares" => Ok(Self::UnbiasedSumOfSquares),
            other => Err(format!("unknown estimator method `{other}`")),
        }
    }
}

/// Concurrence estimate from a shot record.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    /// `Ĉ = √(Ĉ²)` with `Ĉ²` clamped to the pure-state range `[0, 1]`.
    pub value: f64,
    pub std_error: f64,
    pub method: EstimatorMethod,
    /// `4(1 − 3 Ŝ)` before clamping, `Ŝ` the estimate of `ΣP²`.
    pub squared_raw: f64,
    pub squared_std_error: f64,
    pub clamped: bool,
}

/// Estimate of `ΣP²` from the counts.
pub fn sum_of_squares(rec: &ShotRecord, method: EstimatorMethod) -> Result<f64> {
    let n = rec.shots as f64;
    match method {
        EstimatorMethod::Plugin => Ok(rec.frequencies().sum_of_squares()),
        EstimatorMethod::UnbiasedSumOfSquares => {
            if rec.shots < 2 {
                return Err(Error::InvalidArgument("the unbiased estimator needs at least two shots".into()));
            }
            let pairs: f64 = rec.counts.iter().map(|&c| c as f64 * (c as f64 - 1.0)).sum();
            Ok(pairs / (n * (n - 1.0)))
        }
    }
}

/// Delta-method variance of `Σp̂²` under the multinomial covariance:
/// `(4/N)(Σp³ − (Σp²)²)`.
fn sum_of_squares_variance(p: &ProbVector, shots: u64) -> f64 {
    let a = p.as_array();
    let s2: f64 = a.iter().map(|x| x * x).sum();
    let s3: f64 = a.iter().map(|x| x * x * x).sum();
    (4.0 / shots as f64 * (s3 - s2 * s2)).max(0.0)
}

pub fn estimate_concurrence(rec: &ShotRecord, method: EstimatorMethod) -> Result<Estimate> {
    let s = sum_of_squares(rec, method)?;
    let squared_raw = 4.0 * (1.0 - 3.0 * s);
    let squared = squared_raw.clamp(0.0, 1.0);
    let clamped = squared != squared_raw;
    let value = squared.sqrt();
    let squared_std_error = 12.0 * sum_of_squares_variance(&rec.frequencies(), rec.shots).sqrt();
    // dC = dC²/(2C); at C = 0 fall back to √σ(C²), the scale of √C² fluctuations
    let std_error = if value > 0.0 { squared_std_error / (2.0 * value) } else { squared_std_error.sqrt() };
    Ok(Estimate { value, std_error, method, squared_raw, squared_std_error, clamped })
}

/// Bootstrap standard error of `Ĉ`: resample from the empirical frequencies.
pub fn bootstrap_std_error(rec: &ShotRecord, method: EstimatorMethod, resamples: usize, seed: u64) -> Result<f64> {
    if resamples < 2 {
        return Err(Error::InvalidArgument("bootstrap needs at least two resamples".into()));
    }
    let freq = rec.frequencies();
    let mut rng = rng_from_seed(seed);
    let mut values = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let counts = draw_counts(&freq, rec.shots, &mut rng)?;
        let boot = ShotRecord { counts, shots: rec.shots, seed };
        values.push(estimate_concurrence(&boot, method)?.value);
    }
    let mean = values.iter().sum::<f64>() / resamples as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (resamples as f64 - 1.0);
    Ok(var.sqrt())
}

/// Linear-inversion Bloch vector with delta-method errors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochEstimate {
    pub bloch: BlochVector,
    pub std_errors: [f64; 3],
    /// False when the raw estimate lies outside the unit ball. It is never
    /// projected back.
    pub physical: bool,
}

pub fn estimate_bloch(rec: &ShotRecord) -> Result<BlochEstimate> {
    let bloch = bloch_from_frequencies(&rec.frequencies())?;
    // each component is √3 Σ ±p̂_A, so Var = 3(1 − (s/√3)²)/N = (3 − s²)/N
    let n = rec.shots as f64;
    let std_errors = bloch.as_array().map(|s| ((3.0 - s * s).max(0.0) / n).sqrt());
    Ok(BlochEstimate { bloch, std_errors, physical: bloch.is_physical() })
}
