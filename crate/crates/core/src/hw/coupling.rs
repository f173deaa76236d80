use serde::{Deserialize, Serialize};

use super::native::NativeCircuit;
use crate::circuit::GateKind;
use crate::error::{Error, Result};

/// Qubits and the pairs with a switchable coupler.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingGraph {
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl CouplingGraph {
    pub fn new(nodes: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(a, b) in &edges {
            if a == b || !nodes.contains(&a) || !nodes.contains(&b) {
                return Err(Error::arg(format!("edge ({a}, {b}) is not between two distinct nodes")));
            }
        }
        Ok(CouplingGraph { nodes, edges })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        CouplingGraph {
            nodes: (0..n).collect(),
            edges,
        }
    }

    pub fn edgeless(n: usize) -> Self {
        CouplingGraph {
            nodes: (0..n).collect(),
            edges: Vec::new(),
        }
    }

    /// Seven-qubit wheel for the four-qubit, one-round preparation: the round
    /// ancilla (4) is the hub, coupled to every other qubit; the rim runs
    /// 0-1-5-6-2-3-0. The rim holds both singlet pairs of the first basis
    /// state and the busiest phase-gate pairs.
    pub fn seven_qubit_wheel() -> Self {
        let mut edges: Vec<(usize, usize)> = [0, 1, 2, 3, 5, 6].iter().map(|&q| (4, q)).collect();
        let rim = [0, 1, 5, 6, 2, 3];
        for i in 0..rim.len() {
            edges.push((rim[i], rim[(i + 1) % rim.len()]));
        }
        CouplingGraph {
            nodes: (0..7).collect(),
            edges,
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }
}

/// An iSWAP between uncoupled qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingViolation {
    pub op_index: usize,
    pub qubits: (usize, usize),
}

pub fn check_coupling(native: &NativeCircuit, graph: &CouplingGraph) -> Result<Vec<CouplingViolation>> {
    if let Some(q) = (0..native.n_qubits()).find(|q| !graph.nodes.contains(q)) {
        return Err(Error::arg(format!("qubit {q} is not a node of the coupling graph")));
    }
    Ok(native
        .ops
        .iter()
        .enumerate()
        .filter(|(_, op)| op.kind == GateKind::ISwap && !graph.has_edge(op.qubits[0], op.qubits[1]))
        .map(|(i, op)| CouplingViolation {
            op_index: i,
            qubits: (op.qubits[0], op.qubits[1]),
        })
        .collect())
}

/// Distinct uncoupled pairs, each listed once with the smaller index first.
pub fn violating_pairs(violations: &[CouplingViolation]) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = violations
        .iter()
        .map(|v| (v.qubits.0.min(v.qubits.1), v.qubits.0.max(v.qubits.1)))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}
