//! Run configuration and result records shared by the command-line driver
//! and the test suites.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{
    bootstrap_std_error, estimate_bloch, estimate_concurrence, sample_counts, BlochEstimate, Estimate, EstimatorMethod,
};
use crate::gate::{
    self, bloch_from_probabilities, concurrence_amplitude, concurrence_from_probabilities, concurrence_oracle,
    mixed_state_residual, BiasReport, BlochVector, ProbVector,
};
use crate::ion::{self, CompiledCascade, IonLevelScheme};
use crate::linalg::{StateVector, C64};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Exact gate-level pipeline.
    #[default]
    Ideal,
    /// Pulse-level ion simulation compared against the gate model.
    Pulse,
    /// Pulse-level simulation, shelving-cascade statistics and finite-shot
    /// estimation.
    Sample,
    /// Concurrence curve for `cos α|gg⟩ + sin α|ee⟩` over `α ∈ [0, π/2]`.
    Sweep,
    /// Mixed-input bias of the reported `C²` over a range of mixing weights.
    Bias,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ideal" => Ok(Self::Ideal),
            "pulse" => Ok(Self::Pulse),
            "sample" => Ok(Self::Sample),
            "sweep" => Ok(Self::Sweep),
            "bias" => Ok(Self::Bias),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    /// Amplitudes of `χ` in the order `(gg, ge, eg, ee)`; the Bell state
    /// `(|gg⟩ + |ee⟩)/√2` when absent.
    pub state: Option<[C64; 4]>,
    pub alpha_points: usize,
    pub shots: u64,
    pub seed: u64,
    pub method: EstimatorMethod,
    pub fock_cutoff: usize,
    /// Bootstrap resamples for the concurrence error; delta method only when
    /// absent.
    pub bootstrap: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Ideal,
            state: None,
            alpha_points: 33,
            shots: 10_000,
            seed: 0,
            method: EstimatorMethod::Plugin,
            fock_cutoff: ion::DEFAULT_FOCK_CUTOFF,
            bootstrap: None,
        }
    }
}

/// Largest input norm deviation accepted before the state is rejected.
pub const INPUT_NORM_REJECT: f64 = 1e-6;

/// Validates input amplitudes. States off unit norm by more than `1e-12` (but
/// within `1e-6`) are renormalized and a warning is returned.
pub fn prepare_state(amps: &[C64; 4]) -> Result<(StateVector, Option<String>)> {
    let raw = StateVector::new(vec![2, 2], amps.to_vec())?;
    let n = raw.norm();
    if !n.is_finite() || n == 0.0 {
        return Err(Error::NotNormalized(n));
    }
    if (n - 1.0).abs() > INPUT_NORM_REJECT {
        return Err(Error::InvalidArgument(format!(
            "state norm {n} deviates from 1 by more than {INPUT_NORM_REJECT:e}"
        )));
    }
    if (n - 1.0).abs() > tol::NORMALIZATION {
        return Ok((raw.normalized()?, Some(format!("input state norm {n}; renormalized"))));
    }
    Ok((raw, None))
}

/// Parses a JSON run configuration; errors carry the line number.
pub fn config_from_json(text: &str) -> Result<RunConfig> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })
}

/// Parses four `[re, im]` amplitude pairs in the order `(gg, ge, eg, ee)`.
pub fn amplitudes_from_json(text: &str) -> Result<[C64; 4]> {
    let pairs: Vec<[f64; 2]> =
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
    let amps: Vec<C64> = pairs.iter().map(|[re, im]| C64::new(*re, *im)).collect();
    amps.try_into().map_err(|v: Vec<C64>| Error::InvalidArgument(format!("expected 4 amplitudes, found {}", v.len())))
}

pub fn bell_amplitudes() -> [C64; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)]
}

/// `cos α|gg⟩ + sin α|ee⟩`.
pub fn alpha_state(alpha: f64) -> StateVector {
    let amps = vec![C64::new(alpha.cos(), 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(alpha.sin(), 0.0)];
    StateVector::new(vec![2, 2], amps).expect("four amplitudes")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Largest phonon population outside `{|0⟩, |1⟩}` (0 for gate-level runs).
    pub leakage: f64,
    /// The concurrence radicand was negative and clamped to zero.
    pub clamped: bool,
    /// The Bloch estimate lies outside the unit ball.
    pub physicality_flag: bool,
    /// Overlap between pulse-level and gate-level final states.
    pub pulse_fidelity: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimates {
    pub shots: u64,
    pub seed: u64,
    pub counts: [u64; 4],
    pub concurrence: Estimate,
    pub bloch: BlochEstimate,
    pub bootstrap_std_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub probabilities: ProbVector,
    pub bloch: BlochVector,
    pub concurrence_protocol: f64,
    pub concurrence_oracle: f64,
    pub estimates: Option<Estimates>,
    pub diagnostics: Diagnostics,
}

impl RunResult {
    /// False when the pulse simulation leaked out of the one-phonon manifold.
    pub fn is_valid(&self) -> bool {
        self.diagnostics.leakage <= tol::LEAKAGE
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub alpha: f64,
    pub c_protocol: f64,
    pub c_oracle: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RunOutput {
    Single(Box<RunResult>),
    Sweep(Vec<SweepPoint>),
    Bias(Vec<BiasReport>),
}

impl RunOutput {
    pub fn is_valid(&self) -> bool {
        match self {
            RunOutput::Single(r) => r.is_valid(),
            _ => true,
        }
    }

    /// JSON for single runs, CSV for sweeps and bias tables. Every number is
    /// rounded to 12 significant digits.
    pub fn render(&self) -> Result<String> {
        match self {
            RunOutput::Single(r) => to_json(&r.rounded()),
            RunOutput::Sweep(points) => Ok(sweep_csv(points)),
            RunOutput::Bias(rows) => Ok(bias_csv(rows)),
        }
    }
}

pub fn to_json(result: &RunResult) -> Result<String> {
    serde_json::to_string_pretty(result).map_err(|e| Error::InvalidArgument(e.to_string()))
}

pub fn from_json(text: &str) -> Result<RunResult> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })
}

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

impl RunResult {
    pub fn rounded(&self) -> RunResult {
        let p = |v: ProbVector| ProbVector::from_array(v.as_array().map(sig12));
        let b = |v: BlochVector| BlochVector::new(sig12(v.sx), sig12(v.sy), sig12(v.sz));
        RunResult {
            probabilities: p(self.probabilities),
            bloch: b(self.bloch),
            concurrence_protocol: sig12(self.concurrence_protocol),
            concurrence_oracle: sig12(self.concurrence_oracle),
            estimates: self.estimates.as_ref().map(|e| Estimates {
                concurrence: Estimate {
                    value: sig12(e.concurrence.value),
                    std_error: sig12(e.concurrence.std_error),
                    squared_raw: sig12(e.concurrence.squared_raw),
                    squared_std_error: sig12(e.concurrence.squared_std_error),
                    ..e.concurrence
                },
                bloch: BlochEstimate {
                    bloch: b(e.bloch.bloch),
                    std_errors: e.bloch.std_errors.map(sig12),
                    physical: e.bloch.physical,
                },
                bootstrap_std_error: e.bootstrap_std_error.map(sig12),
                ..e.clone()
            }),
            diagnostics: Diagnostics {
                leakage: sig12(self.diagnostics.leakage),
                pulse_fidelity: self.diagnostics.pulse_fidelity.map(sig12),
                ..self.diagnostics
            },
        }
    }
}

/// Shortest text for the 12-digit rounding of `x`, in exponent form outside
/// `[1e-4, 1e15)`.
pub fn format_number(x: f64) -> String {
    let r = sig12(x);
    if r == 0.0 || !r.is_finite() || (1e-4..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("alpha,c_protocol,c_oracle\n");
    for p in points {
        let _ =
            writeln!(out, "{},{},{}", format_number(p.alpha), format_number(p.c_protocol), format_number(p.c_oracle));
    }
    out
}

pub fn bias_csv(rows: &[BiasReport]) -> String {
    let mut out = String::from("lambda,true_squared,reported_squared,actual,predicted,residual\n");
    for r in rows {
        let fields = [r.lambda, r.true_squared, r.reported_squared, r.actual, r.predicted, r.residual];
        let _ = writeln!(out, "{}", fields.map(format_number).join(","));
    }
    out
}

fn input_state(config: &RunConfig) -> Result<StateVector> {
    Ok(prepare_state(&config.state.unwrap_or_else(bell_amplitudes))?.0)
}

pub fn run(config: &RunConfig) -> Result<RunOutput> {
    match config.mode {
        Mode::Ideal => Ok(RunOutput::Single(Box::new(run_ideal(&input_state(config)?)?))),
        Mode::Pulse => {
            let scheme = IonLevelScheme::new(config.fock_cutoff)?;
            Ok(RunOutput::Single(Box::new(run_pulse(&input_state(config)?, &scheme)?)))
        }
        Mode::Sample => Ok(RunOutput::Single(Box::new(run_sample(&input_state(config)?, config)?))),
        Mode::Sweep => Ok(RunOutput::Sweep(sweep(config.alpha_points)?)),
        Mode::Bias => Ok(RunOutput::Bias(bias_table(&input_state(config)?, &BIAS_LAMBDAS)?)),
    }
}

fn exact_result(chi: &StateVector, probabilities: ProbVector, diagnostics: Diagnostics) -> Result<RunResult> {
    let reading = concurrence_from_probabilities(&probabilities);
    Ok(RunResult {
        probabilities,
        bloch: bloch_from_probabilities(&probabilities)?,
        concurrence_protocol: reading.value.min(1.0),
        concurrence_oracle: concurrence_oracle(chi)?,
        estimates: None,
        diagnostics: Diagnostics { clamped: reading.clamped, ..diagnostics },
    })
}

const CLEAN: Diagnostics = Diagnostics { leakage: 0.0, clamped: false, physicality_flag: false, pulse_fidelity: None };

pub fn run_ideal(chi: &StateVector) -> Result<RunResult> {
    let p = gate::ancilla_probabilities(&gate::run_protocol(chi)?)?;
    exact_result(chi, p, CLEAN)
}

fn ancilla_populations(state: &StateVector) -> Result<ProbVector> {
    let m = state.marginal(ion::ANCILLA_ION)?;
    Ok(ProbVector::from_array([m[0], m[1], m[2], m[3]]))
}

pub fn run_pulse(chi: &StateVector, scheme: &IonLevelScheme) -> Result<RunResult> {
    let run = ion::run_pulse_protocol(chi, scheme)?;
    let p = ancilla_populations(&run.execution.state)?;
    exact_result(chi, p, Diagnostics { leakage: run.execution.leakage, pulse_fidelity: Some(run.fidelity), ..CLEAN })
}

pub fn run_sample(chi: &StateVector, config: &RunConfig) -> Result<RunResult> {
    let scheme = IonLevelScheme::new(config.fock_cutoff)?;
    let run = ion::run_pulse_protocol(chi, &scheme)?;
    let readout = ion::compile_readout();
    let mapped = ion::execute(&readout.mapping, &run.execution.state, &scheme)?;
    let cascade = CompiledCascade::new(&readout, &scheme)?;
    let p = cascade.distribution(&mapped.state)?;
    let leakage = run.execution.leakage.max(mapped.leakage);

    let rec = sample_counts(&p, config.shots, config.seed)?;
    let concurrence = estimate_concurrence(&rec, config.method)?;
    let bloch = estimate_bloch(&rec)?;
    let bootstrap = config
        .bootstrap
        .map(|n| bootstrap_std_error(&rec, config.method, n, config.seed.wrapping_add(1)))
        .transpose()?;
    let mut result = exact_result(chi, p, Diagnostics { leakage, pulse_fidelity: Some(run.fidelity), ..CLEAN })?;
    result.diagnostics.clamped |= concurrence.clamped;
    result.diagnostics.physicality_flag = !bloch.physical;
    result.estimates = Some(Estimates {
        shots: rec.shots,
        seed: rec.seed,
        counts: rec.counts,
        concurrence,
        bloch,
        bootstrap_std_error: bootstrap,
    });
    Ok(result)
}

/// Protocol and oracle concurrence on an even grid of `points` values of
/// `α ∈ [0, π/2]`.
pub fn sweep(points: usize) -> Result<Vec<SweepPoint>> {
    if points == 0 {
        return Err(Error::InvalidArgument("sweep needs at least one point".into()));
    }
    let step = if points > 1 { FRAC_PI_2 / (points - 1) as f64 } else { 0.0 };
    (0..points)
        .map(|i| {
            let alpha = i as f64 * step;
            let chi = alpha_state(alpha);
            let p = gate::ancilla_probabilities(&gate::run_protocol(&chi)?)?;
            Ok(SweepPoint {
                alpha,
                c_protocol: concurrence_from_probabilities(&p).value,
                c_oracle: concurrence_amplitude(&chi)?,
            })
        })
        .collect()
}

pub const BIAS_LAMBDAS: [f64; 7] = [1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1];

/// Bias table against the product admixture `|g e⟩⟨g e|`.
pub fn bias_table(chi: &StateVector, lambdas: &[f64]) -> Result<Vec<BiasReport>> {
    let rho_prime = StateVector::basis(&[2, 2], &[0, 1])?.density()?;
    lambdas.iter().map(|&l| mixed_state_residual(&rho_prime, chi, l)).collect()
}
