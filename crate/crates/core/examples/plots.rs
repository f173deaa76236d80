//! Writes the infidelity and run-count charts as SVG files.
//!
//! Usage: `cargo run --example plots -- [OUTPUT_DIR]`

use std::path::PathBuf;

use dfsprep::circuit::ControlStrategy;
use dfsprep::orthogonalizer::PreparationConfig;
use dfsprep::report::{infidelity_svg, run_prepare_experiment, run_sweep_experiment, sweep_svg, write_output, SweepSpec};

fn main() -> dfsprep::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir)?;
    let prepare = run_prepare_experiment(&PreparationConfig::new(6, 1e-10))?;
    let infidelity = dir.join("infidelity_n6.svg");
    write_output(Some(&infidelity), &infidelity_svg(&prepare.rows))?;

    let sweep = run_sweep_experiment(&SweepSpec {
        n_qubits: 6,
        epsilons: (2..=10).map(|e| 10f64.powi(-e)).collect(),
        trials: 200,
        seed: 3,
        strategy: ControlStrategy::Conjugated,
    })?;
    let runs = dir.join("runs_n6.svg");
    write_output(Some(&runs), &sweep_svg(&sweep))?;
    println!("{}\n{}", infidelity.display(), runs.display());
    Ok(())
}
