//! Repeat-until-success simulation: mean circuit runs against ln(1/ε) with
//! the affine fit per basis state.

use dfsprep::circuit::ControlStrategy;
use dfsprep::report::{run_sweep_experiment, SweepSpec};

fn main() -> dfsprep::Result<()> {
    let spec = SweepSpec {
        n_qubits: 6,
        epsilons: vec![1e-2, 1e-4, 1e-6, 1e-8, 1e-10],
        trials: 200,
        seed: 11,
        strategy: ControlStrategy::Conjugated,
    };
    let report = run_sweep_experiment(&spec)?;
    println!("kappa = {:.4}", report.kappa);
    for row in &report.rows {
        println!(
            "eps {:>7.0e}  k {}  m {:>2}  runs {:>7.3} +- {:.3}  model {:>7.3}  bound {:>8.1}",
            row.epsilon, row.k, row.m, row.mean_runs, row.stderr, row.model_runs, row.bound
        );
    }
    for f in &report.fits {
        let r2 = f.fit.r_squared.map_or("n/a".to_string(), |r| format!("{r:.4}"));
        println!("k {}: runs = {:.4} ln(1/eps) + {:.4}, R2 {r2}", f.k, f.fit.slope, f.fit.intercept);
    }
    Ok(())
}
