//! Runs the acceptance criteria and prints one line per criterion.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use dfsprep::basis::{build_basis_matrix, dfs_dimension, s2_null_space_dimension, verify_dfs_membership};
use dfsprep::circuit::{
    preparation_circuit, simulate, Circuit, ControlStrategy, GateKind, GateOp,
};
use dfsprep::hw::{
    estimate_resources, gate_resources, DENSE_DISTANCE_QUBITS, transpile, verify_equivalence, verify_equivalence_probes,
    HardwareParams,
};
use dfsprep::orthogonalizer::{Orthogonalizer, PreparationConfig, StoppingRule};
use dfsprep::report::{run_sweep_experiment, SweepSpec};
use dfsprep::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        passed,
        detail: detail.into(),
    })
}

fn dimension_identity() -> Result<Outcome> {
    let start = Instant::now();
    let mut ok = true;
    let mut found = Vec::new();
    for (n, want) in [(2, 1usize), (4, 2), (6, 5), (8, 14)] {
        let d = dfs_dimension(n)? as usize;
        let null = s2_null_space_dimension(n)?;
        ok &= d == want && null == want;
        found.push(format!("N={n}: {d}/{null}"));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(ok && secs < 10.0, format!("{} in {secs:.2}s", found.join(", ")))
}

fn basis_completeness() -> Result<Outcome> {
    let mut ok = true;
    let mut worst = 0.0f64;
    for n in [2, 4, 6, 8] {
        let (basis, _) = build_basis_matrix(n)?;
        ok &= basis.rank() == basis.dim();
        let r = basis.columns().iter().map(verify_dfs_membership).fold(0.0, f64::max);
        worst = worst.max(r);
    }
    outcome(ok && worst < 1e-10, format!("full rank, worst S2 residual {worst:.1e}"))
}

/// Bound-rule stopping at this ε keeps the amplitude error near 1e-13.
const DISPLAY_EPSILON: f64 = 1e-13;

fn explicit_states() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for (n, targets) in [(4, vec![four_qubit_t2()]), (6, six_qubit_targets())] {
        let orth = Orthogonalizer::new(n)?;
        let mut config = PreparationConfig::new(n, DISPLAY_EPSILON);
        config.stopping = StoppingRule::Bound;
        let prepared = orth.prepare_all(&config)?.basis;
        let offset = orth.oracle().len() - targets.len();
        for (i, t) in targets.iter().enumerate() {
            worst = worst.max(amplitude_distance(&orth.oracle()[offset + i], t));
            worst = worst.max(amplitude_distance(&prepared[offset + i], t));
        }
    }
    outcome(worst < 1e-9, format!("max amplitude deviation {worst:.1e}"))
}

/// Largest over smallest log-infidelity step once infidelity is below 1e-2.
fn step_spread(infidelities: &[f64]) -> Option<f64> {
    let below: Vec<f64> = infidelities.iter().copied().filter(|&x| x < 1e-2 && x > 0.0).collect();
    let steps: Vec<f64> = below.windows(2).map(|w| (w[0] / w[1]).ln()).collect();
    if steps.len() < 2 {
        return None;
    }
    let max = steps.iter().copied().fold(f64::MIN, f64::max);
    let min = steps.iter().copied().fold(f64::MAX, f64::min);
    Some(max / min)
}

fn exact_convergence() -> Result<Outcome> {
    let start = Instant::now();
    let orth = Orthogonalizer::new(6)?;
    let result = orth.prepare_all(&PreparationConfig::new(6, 1e-10))?;
    let first = |k: usize| result.traces[k - 1].records[0].infidelity;
    let immediate = first(2) < 1e-10 && first(3) < 1e-10;
    let mut ok = immediate;
    let mut parts = vec![format!("m=1 infidelity k=2 {:.1e}, k=3 {:.1e}", first(2), first(3))];
    for k in [4, 5] {
        let inf: Vec<f64> = result.traces[k - 1].records.iter().map(|r| r.infidelity).collect();
        match step_spread(&inf) {
            Some(s) => {
                ok &= s <= 1.10;
                parts.push(format!("k={k} step spread {:.3}", s));
            }
            None => {
                ok = false;
                parts.push(format!("k={k} too few steps"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 60.0;
    parts.push(format!("{secs:.2}s"));
    outcome(ok, parts.join(", "))
}

fn sampled_run_counts() -> Result<Outcome> {
    let spec = SweepSpec {
        n_qubits: 6,
        epsilons: (2..=10).map(|e| 10f64.powi(-e)).collect(),
        trials: 200,
        seed: 2024,
        strategy: ControlStrategy::Conjugated,
    };
    let report = run_sweep_experiment(&spec)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for fit in &report.fits {
        let rows: Vec<_> = report.rows_for(fit.k).collect();
        let flat = rows.iter().all(|r| r.m == rows[0].m);
        if flat {
            let pooled = rows.iter().map(|r| r.mean_runs).sum::<f64>() / rows.len() as f64;
            let steady = rows
                .iter()
                .all(|r| (r.mean_runs - pooled).abs() <= 3.0 * r.stderr + 1e-12);
            ok &= steady;
            parts.push(format!("k={} flat at {pooled:.3}", fit.k));
        } else {
            let r2 = fit.fit.r_squared.unwrap_or(0.0);
            ok &= r2 > 0.9;
            parts.push(format!("k={} R2 {r2:.4}", fit.k));
        }
    }
    let bounded = report.rows.iter().all(|r| r.mean_runs <= r.bound + 3.0 * r.stderr);
    ok &= bounded;
    parts.push(format!("bound respected: {bounded}"));
    outcome(ok, parts.join(", "))
}

fn born_statistics() -> Result<Outcome> {
    let orth = Orthogonalizer::new(4)?;
    let round = orth.round_circuit(2, ControlStrategy::Conjugated)?;
    let input = orth.basis().column(2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let trials = 10_000;
    let mut zeros = 0usize;
    for _ in 0..trials {
        if simulate(&round, input, &mut rng)?.all_zero() {
            zeros += 1;
        }
    }
    let freq = zeros as f64 / trials as f64;
    let sigma = (0.75 * 0.25 / trials as f64).sqrt();
    outcome(
        (freq - 0.75).abs() <= 3.0 * sigma,
        format!("all-zeros frequency {freq:.4}, 3 sigma {:.4}", 3.0 * sigma),
    )
}

fn condition_bound() -> Result<Outcome> {
    let mut ok = true;
    let mut kappa4 = 0.0;
    for n in [4, 6, 8] {
        let orth = Orthogonalizer::new(n)?;
        let kappa = orth.spectral().kappa;
        ok &= orth.complement_norms().iter().all(|&c| kappa >= 1.0 / c - 1e-12);
        if n == 4 {
            kappa4 = kappa;
        }
    }
    let exact = (kappa4 - 3f64.sqrt()).abs() < 1e-12;
    outcome(ok && exact, format!("kappa(4) = {kappa4:.15}"))
}

/// Dense check for narrow registers, seeded probes beyond.
fn distance(original: &Circuit) -> Result<f64> {
    let native = transpile(original)?;
    if native.n_qubits() <= DENSE_DISTANCE_QUBITS {
        verify_equivalence(original, &native)
    } else {
        verify_equivalence_probes(original, &native, 16, native.n_qubits() as u64)
    }
}

fn transpiler_soundness() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut count = 0;
    for kind in GateKind::ALL {
        let widths: Vec<usize> = match kind.arity() {
            Some(a) => vec![a],
            None => (1..=8).collect(),
        };
        for w in widths {
            let mut c = Circuit::new(w, 0)?;
            c.push(GateOp::new(kind, vec![0.7; kind.param_count()], (0..w).collect())?)?;
            worst = worst.max(distance(&c)?);
            count += 1;
        }
    }
    for n in [4, 6] {
        let orth = Orthogonalizer::new(n)?;
        for strategy in [ControlStrategy::Conjugated, ControlStrategy::GateWise] {
            for k1 in 1..=orth.basis().dim() {
                worst = worst.max(distance(&preparation_circuit(orth.basis().pairings(), k1, strategy)?)?);
                count += 1;
                if k1 >= 2 {
                    worst = worst.max(distance(&orth.round_circuit(k1, strategy)?)?);
                    count += 1;
                }
            }
        }
    }
    outcome(worst < 1e-9, format!("{count} circuits, worst distance {worst:.1e}"))
}

fn within(value: f64, target: f64, rel: f64) -> bool {
    (value - target).abs() <= rel * target
}

fn gate_resource_table() -> Result<Outcome> {
    let params = HardwareParams::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for (kind, ns) in [(GateKind::CNOT, 70.0), (GateKind::CZ, 85.0), (GateKind::CH, 105.0)] {
        let row = gate_resources(kind, 0, &params)?;
        let good = row.iswap_count == 2 && within(row.duration_ns, ns, 0.15);
        ok &= good;
        parts.push(format!("{} {}/{:.0}ns", row.gate, row.iswap_count, row.duration_ns));
    }
    let ccx = gate_resources(GateKind::CCX, 0, &params)?;
    let ccx_ok = ccx.iswap_count <= 12 && (400.0..=600.0).contains(&ccx.duration_ns);
    ok &= ccx_ok;
    parts.push(format!("CCX {}/{:.0}ns", ccx.iswap_count, ccx.duration_ns));
    let s5 = gate_resources(GateKind::S1, 5, &params)?;
    ok &= s5.toffolis == 5 && s5.ancillas == 2;
    parts.push(format!("S1(5) {} Toffolis, {} ancillas", s5.toffolis, s5.ancillas));
    let counts = (4..=8)
        .map(|n| gate_resources(GateKind::S1, n, &params).map(|r| r.iswap_count as i64))
        .collect::<Result<Vec<_>>>()?;
    let affine = counts.windows(3).all(|w| w[2] - 2 * w[1] + w[0] == 0);
    ok &= affine;
    parts.push(format!("S1(4..8) iSWAPs {counts:?}"));
    outcome(ok, parts.join(", "))
}

fn circuit_timing() -> Result<Outcome> {
    let params = HardwareParams::default();
    let (basis, _) = build_basis_matrix(4)?;
    let ns = |k1| -> Result<f64> {
        let c = preparation_circuit(basis.pairings(), k1, ControlStrategy::GateWise)?;
        Ok(estimate_resources(&transpile(&c)?, &params).duration_ns)
    };
    let (u1, u2) = (ns(1)?, ns(2)?);
    outcome(
        within(u1, 80.0, 0.25) && within(u2, 4500.0, 0.25),
        format!("u_1 {u1:.0} ns, u_2 {u2:.0} ns"),
    )
}

fn property_suites() -> Result<Outcome> {
    let failures = run_property_suites();
    let detail = if failures.is_empty() {
        format!("5 suites x {PROPERTY_CASES} cases")
    } else {
        failures
            .iter()
            .map(|(n, e)| format!("{n}: {e}"))
            .collect::<Vec<_>>()
            .join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 11] = [
        ("dimension identity", dimension_identity),
        ("basis completeness", basis_completeness),
        ("explicit states", explicit_states),
        ("exact geometric convergence", exact_convergence),
        ("sampled run counts", sampled_run_counts),
        ("Born statistics", born_statistics),
        ("condition number bound", condition_bound),
        ("transpiler soundness", transpiler_soundness),
        ("gate resources", gate_resource_table),
        ("circuit timing", circuit_timing),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (passed, detail) = match run() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<28} {}  {} [{:.1}s]",
            i + 1,
            name,
            if passed { "PASS" } else { "FAIL" },
            detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
