use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dfsprep::basis::build_basis_matrix;
use dfsprep::circuit::{Circuit, ControlStrategy, GateKind};
use dfsprep::hw::{
    estimate_resources, gate_resources, gate_table, iswap_hamiltonian_check, transpile,
    GateResourceRow, HardwareParams,
};
use dfsprep::orthogonalizer::{Mode, PreparationConfig, StoppingRule};
use dfsprep::report::{
    infidelity_svg, run_prepare_experiment, run_sweep_experiment, run_verify, sweep_csv,
    sweep_svg, to_csv, to_json, write_output, Format, SweepSpec,
};
use dfsprep::statevector::C64;
use dfsprep::{Error, Result};

#[derive(Parser)]
#[command(name = "dfsprep", version, about = "Decoherence-free subspace basis preparation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List the pairing basis for N qubits.
    Basis {
        #[arg(long)]
        n: usize,
        /// Include state amplitudes.
        #[arg(long)]
        amplitudes: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Prepare every orthogonal basis state and report infidelity per iteration.
    Prepare {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-10)]
        epsilon: f64,
        #[arg(long, default_value = "exact")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value = "oracle")]
        stopping: StoppingRule,
        #[arg(long, default_value_t = 200)]
        max_m: usize,
        #[arg(long, default_value = "csv")]
        format: Format,
        /// Also write the full result document here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Mean circuit runs over seeded sampled trials for several epsilons.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        epsilons: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// Native iSWAP counts and durations.
    Resources {
        /// A gate kind, with `S1(n)` for the n-qubit phase gate.
        #[arg(long, conflicts_with = "circuit")]
        gate: Option<String>,
        /// A circuit in JSON form.
        #[arg(long)]
        circuit: Option<PathBuf>,
        #[arg(long, default_value_t = 6.0)]
        omega_ghz: f64,
        #[arg(long, default_value_t = 25.0)]
        rabi_mhz: f64,
        #[arg(long, default_value_t = 25.0)]
        g_mhz: f64,
        /// Report the coupling-Hamiltonian iSWAP diagnostic instead.
        #[arg(long)]
        hamiltonian: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Run the consistency checks for N qubits.
    Verify {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Serialize)]
struct BasisEntry {
    k: usize,
    parens: String,
    pairing: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct BasisListing {
    #[serde(rename = "N")]
    n: usize,
    dimension: usize,
    kappa: f64,
    states: Vec<BasisEntry>,
}

#[derive(Serialize)]
struct ErrorPayload<'a> {
    error: &'a str,
    message: String,
}

fn parse_gate(text: &str) -> Result<(GateKind, usize)> {
    let t = text.trim();
    let upper = t.to_ascii_uppercase();
    if let Some(rest) = upper.strip_prefix("S1") {
        let width = rest.trim_matches(|c| c == '(' || c == ')' || c == ':');
        let width = if width.is_empty() {
            3
        } else {
            width
                .parse()
                .map_err(|_| Error::Argument(format!("bad phase-gate width in {text:?}")))?
        };
        return Ok((GateKind::S1, width));
    }
    Ok((t.parse()?, 0))
}

fn amplitude_pairs(amps: &[C64]) -> Vec<[f64; 2]> {
    amps.iter().map(|z| [z.re, z.im]).collect()
}

/// Exit status 1 means the command ran but a requested check failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Basis { n, amplitudes, output } => {
            let (basis, spectral) = build_basis_matrix(n)?;
            let states = (1..=basis.dim())
                .map(|k| BasisEntry {
                    k,
                    parens: basis.parens()[k - 1].as_str().to_string(),
                    pairing: basis.pairings()[k - 1].to_string(),
                    amplitudes: amplitudes.then(|| amplitude_pairs(basis.column(k).amplitudes())),
                })
                .collect();
            let listing = BasisListing {
                n,
                dimension: basis.dim(),
                kappa: spectral.kappa,
                states,
            };
            write_output(output.out.as_deref(), &to_json(&listing)?)?;
            Ok(true)
        }
        Command::Prepare {
            n,
            epsilon,
            mode,
            seed,
            trials,
            stopping,
            max_m,
            format,
            json,
            output,
        } => {
            let mut config = PreparationConfig::new(n, epsilon);
            config.mode = mode;
            config.seed = seed;
            config.trials = trials;
            config.stopping = stopping;
            config.max_m = max_m;
            let report = run_prepare_experiment(&config)?;
            let text = match format {
                Format::Csv => to_csv(&report.rows)?,
                Format::Json => to_json(&report.result)?,
                Format::Svg => infidelity_svg(&report.rows),
            };
            write_output(output.out.as_deref(), &text)?;
            if let Some(path) = json {
                write_output(Some(&path), &to_json(&report.result)?)?;
            }
            Ok(true)
        }
        Command::Sweep {
            n,
            epsilons,
            trials,
            seed,
            format,
            output,
        } => {
            let spec = SweepSpec {
                n_qubits: n,
                epsilons,
                trials,
                seed,
                strategy: ControlStrategy::Conjugated,
            };
            let report = run_sweep_experiment(&spec)?;
            let text = match format {
                Format::Csv => sweep_csv(&report)?,
                Format::Json => to_json(&report)?,
                Format::Svg => sweep_svg(&report),
            };
            write_output(output.out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Resources {
            gate,
            circuit,
            omega_ghz,
            rabi_mhz,
            g_mhz,
            hamiltonian,
            output,
        } => {
            let params = HardwareParams::from_ghz_mhz(omega_ghz, rabi_mhz, g_mhz)?;
            if hamiltonian {
                write_output(output.out.as_deref(), &to_json(&iswap_hamiltonian_check(&params))?)?;
                return Ok(true);
            }
            let rows: Vec<GateResourceRow> = match (gate, circuit) {
                (Some(g), _) => {
                    let (kind, width) = parse_gate(&g)?;
                    vec![gate_resources(kind, width, &params)?]
                }
                (None, Some(path)) => {
                    let c = Circuit::from_json(&std::fs::read_to_string(&path)?)?;
                    let native = transpile(&c)?;
                    let est = estimate_resources(&native, &params);
                    vec![GateResourceRow {
                        gate: path.display().to_string(),
                        iswap_count: est.iswap_count,
                        single_qubit_count: est.single_qubit_count,
                        duration_ns: est.duration_ns,
                        toffolis: native.toffolis,
                        ancillas: native.ancillas.len(),
                    }]
                }
                (None, None) => gate_table(&params, &[4, 5, 6, 7, 8])?,
            };
            write_output(output.out.as_deref(), &to_csv(&rows)?)?;
            Ok(true)
        }
        Command::Verify { n, output } => {
            let report = run_verify(n)?;
            write_output(output.out.as_deref(), &to_json(&report)?)?;
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let payload = ErrorPayload {
                error: e.kind(),
                message: e.to_string(),
            };
            eprintln!("{}", serde_json::to_string(&payload).unwrap_or_else(|_| e.to_string()));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
