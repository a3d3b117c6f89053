//! Pulse programs and run records checked against files in `tests/golden`.
//! Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::PathBuf;

use tetra_core::ion::{compile_protocol, compile_readout};
use tetra_core::pipeline::{self, from_json, run, Mode, RunConfig, RunOutput};
use tetra_core::{EstimatorMethod, PulseProgram};

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name} differs from golden copy");
}

#[test]
fn protocol_program_text() {
    let text = compile_protocol().to_text();
    golden("protocol.txt", &text);
    assert_eq!(PulseProgram::from_text(&text).unwrap().to_text(), text);
}

#[test]
fn readout_text() {
    golden("readout.txt", &compile_readout().to_string());
}

#[test]
fn sweep_csv() {
    let out = run(&RunConfig { mode: Mode::Sweep, alpha_points: 5, ..RunConfig::default() }).unwrap();
    golden("sweep5.csv", &out.render().unwrap());
}

#[test]
fn sample_record() {
    let config = RunConfig {
        mode: Mode::Sample,
        shots: 10_000,
        seed: 42,
        method: EstimatorMethod::UnbiasedSumOfSquares,
        ..RunConfig::default()
    };
    let text = run(&config).unwrap().render().unwrap();
    golden("bell_sample.json", &text);
    let parsed = from_json(&text).unwrap();
    assert_eq!(pipeline::to_json(&parsed).unwrap(), text);
}

#[test]
fn single_runs_round_trip_through_json() {
    for mode in [Mode::Ideal, Mode::Pulse, Mode::Sample] {
        let RunOutput::Single(r) = run(&RunConfig { mode, ..RunConfig::default() }).unwrap() else {
            panic!("{mode:?} should give a single record");
        };
        let text = pipeline::to_json(&r.rounded()).unwrap();
        let back = from_json(&text).unwrap();
        assert_eq!(back, r.rounded());
        assert_eq!(pipeline::to_json(&back).unwrap(), text);
        assert!(r.is_valid());
    }
}
