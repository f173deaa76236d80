use serde::{Deserialize, Serialize};

use super::decompose::{decompose_gate, synthesize_multiqubit_phase};
use super::native::NativeCircuit;
use super::params::HardwareParams;
use crate::circuit::{GateKind, GateOp};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceEstimate {
    pub iswap_count: usize,
    pub single_qubit_count: usize,
    /// Critical path under ASAP scheduling.
    pub duration_ns: f64,
}

pub fn op_duration_ns(op: &GateOp, params: &HardwareParams) -> f64 {
    match op.kind {
        GateKind::RZ => 0.0,
        GateKind::RX => params.rx_ns(op.theta()),
        GateKind::ISwap => params.iswap_ns(),
        _ => 0.0,
    }
}

/// Each op starts once all its qubits are free and holds them for its
/// duration.
pub fn estimate_resources(native: &NativeCircuit, params: &HardwareParams) -> ResourceEstimate {
    let mut free = vec![0.0f64; native.n_qubits()];
    for op in &native.ops {
        let start = op.qubits.iter().map(|&q| free[q]).fold(0.0, f64::max);
        let end = start + op_duration_ns(op, params);
        for &q in &op.qubits {
            free[q] = end;
        }
    }
    ResourceEstimate {
        iswap_count: native.iswap_count(),
        single_qubit_count: native.count(GateKind::RX) + native.count(GateKind::RZ),
        duration_ns: free.iter().copied().fold(0.0, f64::max),
    }
}

/// One line of the per-gate resource table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateResourceRow {
    pub gate: String,
    pub iswap_count: usize,
    pub single_qubit_count: usize,
    pub duration_ns: f64,
    pub toffolis: usize,
    pub ancillas: usize,
}

impl GateResourceRow {
    pub fn from_native(gate: impl Into<String>, native: &NativeCircuit, params: &HardwareParams) -> Self {
        let est = estimate_resources(native, params);
        GateResourceRow {
            gate: gate.into(),
            iswap_count: est.iswap_count,
            single_qubit_count: est.single_qubit_count,
            duration_ns: est.duration_ns,
            toffolis: native.toffolis,
            ancillas: native.ancillas.len(),
        }
    }
}

/// Resources of a single gate kind; `S1` is taken on `s1_width` qubits.
pub fn gate_resources(kind: GateKind, s1_width: usize, params: &HardwareParams) -> Result<GateResourceRow> {
    let (label, native) = match kind {
        GateKind::S1 => (format!("S1({s1_width})"), synthesize_multiqubit_phase(s1_width)?),
        k => {
            let arity = k.arity().unwrap_or(1);
            let params_v = vec![std::f64::consts::FRAC_PI_2; k.param_count()];
            let op = GateOp::new(k, params_v, (0..arity).collect())?;
            (k.name().to_string(), decompose_gate(&op)?)
        }
    };
    Ok(GateResourceRow::from_native(label, &native, params))
}

/// Z, X, H, CNOT, CZ, CH, CCX, then S1(n) for each requested width.
pub fn gate_table(params: &HardwareParams, s1_widths: &[usize]) -> Result<Vec<GateResourceRow>> {
    use GateKind::*;
    let mut rows = Vec::new();
    for kind in [Z, X, H, CNOT, CZ, CH, CCX] {
        rows.push(gate_resources(kind, 0, params)?);
    }
    for &n in s1_widths {
        rows.push(gate_resources(S1, n, params)?);
    }
    Ok(rows)
}
