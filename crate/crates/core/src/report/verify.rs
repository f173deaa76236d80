use serde::{Deserialize, Serialize};

use crate::basis::{dfs_dimension, s2_null_space_dimension, verify_dfs_membership, MAX_S2_QUBITS};
use crate::circuit::{Circuit, ControlStrategy, GateKind, GateOp};
use crate::error::Result;
use crate::hw::{equivalence_distance, transpile, verify_equivalence};
use crate::orthogonalizer::{Orthogonalizer, PreparationConfig};
use crate::statevector::{infidelity, inner_product, QuantumState, C64};

pub const VERIFY_EPSILON: f64 = 1e-10;
pub const STATE_TOLERANCE: f64 = 1e-9;
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-9;
pub const ORACLE_TOLERANCE: f64 = 1e-12;
/// Transpiled rounds wider than this are skipped.
pub const VERIFY_MAX_JOINT_QUBITS: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    fn below(name: &str, value: f64, threshold: f64, detail: impl Into<String>) -> Check {
        Check {
            name: name.to_string(),
            passed: value < threshold,
            value,
            threshold,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Off-diagonal overlaps of states within infidelity `ε` of an orthonormal
/// set are at most `2√(2ε)`.
pub fn prepared_gram_tolerance(epsilon: f64) -> f64 {
    2.0 * (2.0 * epsilon).sqrt()
}

fn gram_deviation(states: &[QuantumState]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (i, u) in states.iter().enumerate() {
        for (j, v) in states.iter().enumerate() {
            let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max((inner_product(u, v)? - expect).norm());
        }
    }
    Ok(worst)
}

/// S² residuals, orthonormality, oracle fidelities and transpiler
/// equivalence for one `N`.
pub fn run_verify(n: usize) -> Result<VerifyReport> {
    let orth = Orthogonalizer::new(n)?;
    let basis = orth.basis();
    let d = basis.dim();
    let mut checks = Vec::new();

    let expected = dfs_dimension(n)? as usize;
    if n <= MAX_S2_QUBITS {
        let null = s2_null_space_dimension(n)?;
        checks.push(Check::below(
            "dimension",
            expected.abs_diff(null) as f64,
            0.5,
            format!("catalan {expected}, S2 kernel {null}"),
        ));
    }
    checks.push(Check::below(
        "rank",
        d.abs_diff(basis.rank()) as f64,
        0.5,
        format!("rank {} of {d} columns", basis.rank()),
    ));
    let residual = basis
        .columns()
        .iter()
        .map(verify_dfs_membership)
        .fold(0.0, f64::max);
    checks.push(Check::below("basis_s2_residual", residual, RESIDUAL_TOLERANCE, ""));

    checks.push(Check::below(
        "oracle_orthonormality",
        gram_deviation(orth.oracle())?,
        ORACLE_TOLERANCE,
        "max |G - I| of the classical reference",
    ));
    let result = orth.prepare_all(&PreparationConfig::new(n, VERIFY_EPSILON))?;
    checks.push(Check::below(
        "orthonormality",
        gram_deviation(&result.basis)?,
        prepared_gram_tolerance(VERIFY_EPSILON),
        "max |G - I| of the prepared states",
    ));
    let mut worst_inf = 0.0f64;
    for (u, t) in result.basis.iter().zip(orth.oracle()) {
        worst_inf = worst_inf.max(infidelity(u, t)?);
    }
    checks.push(Check::below("oracle_infidelity", worst_inf, STATE_TOLERANCE, ""));
    let prepared_residual = result
        .basis
        .iter()
        .map(verify_dfs_membership)
        .fold(0.0, f64::max);
    checks.push(Check::below("prepared_s2_residual", prepared_residual, STATE_TOLERANCE, ""));

    let mut gate_dist = 0.0f64;
    for kind in GateKind::ALL {
        let qubits: Vec<usize> = (0..kind.arity().unwrap_or(5)).collect();
        let mut c = Circuit::new(qubits.len(), 0)?;
        c.push(GateOp::new(kind, vec![0.3; kind.param_count()], qubits)?)?;
        gate_dist = gate_dist.max(verify_equivalence(&c, &transpile(&c)?)?);
    }
    checks.push(Check::below("gate_equivalence", gate_dist, EQUIVALENCE_TOLERANCE, "every gate kind"));

    let (mut round_dist, mut checked, mut skipped) = (0.0f64, 0, 0);
    for k_plus_1 in 2..=d {
        let round = orth.round_circuit(k_plus_1, ControlStrategy::Conjugated)?;
        let native = transpile(&round)?;
        if native.n_qubits() > VERIFY_MAX_JOINT_QUBITS {
            skipped += 1;
            continue;
        }
        round_dist = round_dist.max(equivalence_distance(&round, &native, k_plus_1 as u64)?);
        checked += 1;
    }
    if checked > 0 {
        checks.push(Check::below(
            "round_equivalence",
            round_dist,
            EQUIVALENCE_TOLERANCE,
            format!("{checked} rounds checked, {skipped} skipped above {VERIFY_MAX_JOINT_QUBITS} qubits"),
        ));
    }

    Ok(VerifyReport {
        n,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
