use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;

use tetra_core::ion::{compile_protocol, compile_readout};
use tetra_core::pipeline::{amplitudes_from_json, config_from_json, prepare_state, run, Mode, RunConfig};
use tetra_core::EstimatorMethod;

/// Concurrence of a two-qubit pure state read out through a four-level
/// ancilla: exact gate model, trapped-ion pulse simulation and finite-shot
/// estimation.
#[derive(Parser, Debug)]
#[command(name = "tetra", version)]
struct Args {
    /// JSON run configuration; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,

    /// ideal | pulse | sample | sweep | bias
    #[arg(long)]
    mode: Option<Mode>,

    /// Amplitudes as four [re, im] pairs in the order gg, ge, eg, ee: a JSON
    /// file path or the JSON text itself. Defaults to (|gg⟩ + |ee⟩)/√2.
    #[arg(long)]
    state: Option<String>,

    /// Grid points over α ∈ [0, π/2] in sweep mode.
    #[arg(long)]
    alpha_points: Option<usize>,

    /// Shots in sample mode.
    #[arg(long)]
    shots: Option<u64>,

    #[arg(long)]
    seed: Option<u64>,

    /// plugin | unbiased
    #[arg(long)]
    method: Option<EstimatorMethod>,

    /// Bootstrap resamples for the concurrence error in sample mode.
    #[arg(long)]
    bootstrap: Option<usize>,

    /// Number of phonon Fock states kept (at least 2).
    #[arg(long)]
    fock_cutoff: Option<usize>,

    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Print the compiled pulse program and readout, then exit.
    #[arg(long)]
    print_program: bool,
}

fn read_state(arg: &str) -> Result<String> {
    let path = Path::new(arg);
    if !arg.trim_start().starts_with('[') && path.exists() {
        return std::fs::read_to_string(path).with_context(|| format!("reading state file {}", path.display()));
    }
    Ok(arg.to_string())
}

fn build_config(args: &Args) -> Result<RunConfig> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            config_from_json(&text).with_context(|| format!("config {}", path.display()))?
        }
        None => RunConfig::default(),
    };
    if let Some(m) = args.mode {
        config.mode = m;
    }
    if let Some(s) = &args.state {
        config.state = Some(amplitudes_from_json(&read_state(s)?).context("--state")?);
    }
    if let Some(n) = args.alpha_points {
        config.alpha_points = n;
    }
    if let Some(n) = args.shots {
        config.shots = n;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(m) = args.method {
        config.method = m;
    }
    if args.bootstrap.is_some() {
        config.bootstrap = args.bootstrap;
    }
    if let Some(f) = args.fock_cutoff {
        config.fock_cutoff = f;
    }
    if let Some(amps) = &config.state {
        if let (_, Some(warning)) = prepare_state(amps)? {
            eprintln!("warning: {warning}");
        }
    }
    Ok(config)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn main_inner(args: &Args) -> Result<bool> {
    if args.print_program {
        let text = format!("{}{}", compile_protocol(), compile_readout());
        write_output(args.out.as_deref(), &text)?;
        return Ok(true);
    }
    let config = build_config(args)?;
    if config.mode == Mode::Sample && config.shots == 0 {
        bail!("--shots must be positive");
    }
    let output = run(&config)?;
    write_output(args.out.as_deref(), &output.render()?)?;
    let valid = output.is_valid();
    if !valid {
        eprintln!("error: phonon leakage above tolerance; run flagged invalid");
    }
    Ok(valid)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match main_inner(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
