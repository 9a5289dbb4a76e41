//! `sinister`: analyse two-qubit states, scan random states against the
//! concurrence/sinisterness envelope, simulate finite-shot measurements,
//! check perturbation formulas and run the identity suite.
//!
//! Exit codes: 0 success, 2 unreadable or malformed input or unwritable
//! output, 3 invalid state or failed computation, 4 envelope violation in a
//! scan, 5 failed identity or perturbation check.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sinister_core::experiments::{
    estimator_convergence, scan_random_states_with, simulate_measurements, write_csv, ENVELOPE_TOLERANCE,
};
use sinister_core::io::{analyze, parse_state};
use sinister_core::perturbation::{perturbation_report, random_direction, werner_report};
use sinister_core::verify::{run_identities, Fault, VerifyOptions};
use sinister_core::{DensityMatrix, Error, SamplingMode};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "sinister", version, about = "Two-qubit sinisterness and concurrence toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bloch data, Γ, sinisterness, chirality and concurrence of a state file.
    Analyze {
        state: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Samples random states and checks -C⁴ ≥ S ≥ -((2C+1)/3)³.
    Scan {
        #[arg(long = "n", default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Mixed)]
        mode: ModeArg,
        /// CSV destination.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = ENVELOPE_TOLERANCE)]
        tolerance: f64,
        #[arg(long)]
        json: bool,
    },
    /// Estimates S from simulated Pauli measurements on a state file.
    Simulate {
        state: PathBuf,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        shots: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Comma-separated ascending shot counts for a convergence table.
        #[arg(long, value_delimiter = ',')]
        ladder: Vec<u64>,
        #[arg(long, default_value_t = 50)]
        repeats: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compares analytic first-order variations with finite differences.
    ///
    /// With `--werner ε` the state file is the target ρ′ of the mixture path
    /// from the Werner state; otherwise the state is perturbed along a random
    /// traceless Hermitian direction.
    Perturb {
        state: PathBuf,
        #[arg(long)]
        werner: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the closed-form identity suite.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Uniform,
    TowardPure,
    TowardWerner,
    /// All three modes in turn.
    Mixed,
}

impl ModeArg {
    fn modes(self) -> Vec<SamplingMode> {
        match self {
            ModeArg::Uniform => vec![SamplingMode::Uniform],
            ModeArg::TowardPure => vec![SamplingMode::TowardPure],
            ModeArg::TowardWerner => vec![SamplingMode::TowardWerner],
            ModeArg::Mixed => SamplingMode::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    GIndex,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Parse(_)) { 2 } else { 3 };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Analyze { state, out } => {
            let sink = open_sink(out.as_deref())?;
            let report = analyze(&load_state(&state)?)?;
            write_json(sink, &report)?;
            Ok(0)
        }
        Command::Scan {
            n,
            seed,
            mode,
            out,
            tolerance,
            json,
        } => scan(n as usize, seed, mode, out.as_deref(), tolerance, json),
        Command::Simulate {
            state,
            shots,
            seed,
            ladder,
            repeats,
            out,
        } => {
            let sink = open_sink(out.as_deref())?;
            let rho = load_state(&state)?;
            let estimate = simulate_measurements(&rho, shots, seed)?;
            let convergence = if ladder.is_empty() {
                None
            } else {
                Some(estimator_convergence(&rho, &ladder, repeats, seed)?)
            };
            #[derive(Serialize)]
            struct Simulation<E, C> {
                estimate: E,
                convergence: C,
            }
            write_json(sink, &Simulation { estimate, convergence })?;
            Ok(0)
        }
        Command::Perturb {
            state,
            werner,
            seed,
            tolerance,
            out,
        } => {
            let sink = open_sink(out.as_deref())?;
            let rho = load_state(&state)?;
            let report = match werner {
                Some(eps) => werner_report(eps, &rho)?,
                None => perturbation_report(&rho, &random_direction(seed))?,
            };
            write_json(sink, &report)?;
            Ok(if report.within(tolerance) { 0 } else { 5 })
        }
        Command::Verify {
            seed,
            samples,
            json,
            inject_fault,
        } => {
            let fault = match inject_fault {
                Some(FaultArg::GIndex) => Fault::GIndex,
                None => Fault::None,
            };
            let checks = run_identities(&VerifyOptions { seed, samples, fault });
            let mut stdout = io::stdout().lock();
            if json {
                write_json(Box::new(&mut stdout), &checks)?;
            } else {
                for c in &checks {
                    let line = format!(
                        "{} {:<22} residual {:.3e} tolerance {:.0e}",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.residual,
                        c.tolerance
                    );
                    writeln!(stdout, "{line}").map_err(io_failure)?;
                }
            }
            Ok(if checks.iter().all(|c| c.passed) { 0 } else { 5 })
        }
    }
}

fn scan(n: usize, seed: u64, mode: ModeArg, out: Option<&Path>, tolerance: f64, json: bool) -> Result<u8, Failure> {
    let csv = out.map(create).transpose()?;
    let result = scan_random_states_with(n, seed, &mode.modes(), tolerance)?;
    if let Some(file) = csv {
        write_csv(&result.records, BufWriter::new(file)).map_err(io_failure)?;
    }
    let s = &result.summary;
    let mut stdout = io::stdout().lock();
    if json {
        write_json(Box::new(&mut stdout), s)?;
    } else {
        let text = format!(
            "states {}\nseparable {} ({:.4})\nupper-bound violations (S > -C^4) {}\nlower-bound violations (S < -((2C+1)/3)^3) {}\nseparable-bound violations (|S| > 1/27) {}\nsinisterness range [{:.6}, {:.6}]\nmax concurrence {:.6}",
            s.n,
            s.separable,
            s.separable_fraction,
            s.upper_violations,
            s.lower_violations,
            s.separable_violations,
            s.min_sinisterness,
            s.max_sinisterness,
            s.max_concurrence
        );
        writeln!(stdout, "{text}").map_err(io_failure)?;
    }
    Ok(if s.violations() == 0 { 0 } else { 4 })
}

fn io_failure(e: io::Error) -> Failure {
    Failure::new(2, e.to_string())
}

fn create(path: &Path) -> Result<File, Failure> {
    File::create(path).map_err(|e| Failure::new(2, format!("cannot write {}: {e}", path.display())))
}

fn open_sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(create(p)?)),
        None => Box::new(io::stdout()),
    })
}

fn write_json<T: Serialize + ?Sized>(mut sink: Box<dyn Write + '_>, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut sink, value).map_err(|e| Failure::new(2, e.to_string()))?;
    writeln!(sink).and_then(|_| sink.flush()).map_err(io_failure)
}

fn load_state(path: &Path) -> Result<DensityMatrix, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_state(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn mode_mix() {
        assert_eq!(ModeArg::Mixed.modes(), SamplingMode::ALL.to_vec());
        assert_eq!(ModeArg::TowardWerner.modes(), vec![SamplingMode::TowardWerner]);
    }

    #[test]
    fn exit_codes_for_errors() {
        assert_eq!(Failure::from(Error::Parse("x".into())).code, 2);
        assert_eq!(Failure::from(Error::Degeneracy("x".into())).code, 3);
    }

    #[test]
    fn defaults() {
        let cli = Cli::try_parse_from(["sinister", "scan"]).unwrap();
        match cli.command {
            Command::Scan { n, seed, tolerance, .. } => {
                assert_eq!(n, 100_000);
                assert_eq!(seed, DEFAULT_SEED);
                assert_eq!(tolerance, ENVELOPE_TOLERANCE);
            }
            _ => panic!("expected scan"),
        }
        assert!(Cli::try_parse_from(["sinister", "scan", "--n", "0"]).is_err());
    }
}
