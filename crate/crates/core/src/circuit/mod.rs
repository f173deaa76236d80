//! Gate-level circuit representation.
//!
//! Register layout: system qubits `0..n_system`, then ancillas. Qubit indices
//! are 0-based everywhere in this module and in serialized circuits.

mod builders;
mod sim;

pub use builders::*;
pub use sim::*;

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{self, GateMatrix};
use crate::statevector::check_targets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    X,
    Z,
    H,
    CNOT,
    CZ,
    CH,
    CCX,
    /// `I - 2|1…1⟩⟨1…1|` on however many qubits the op lists.
    S1,
    RX,
    RZ,
    RY,
    #[serde(rename = "ISWAP")]
    ISwap,
    A,
    B,
    C,
    D,
}

impl GateKind {
    pub const ALL: [GateKind; 16] = [
        GateKind::X,
        GateKind::Z,
        GateKind::H,
        GateKind::CNOT,
        GateKind::CZ,
        GateKind::CH,
        GateKind::CCX,
        GateKind::S1,
        GateKind::RX,
        GateKind::RZ,
        GateKind::RY,
        GateKind::ISwap,
        GateKind::A,
        GateKind::B,
        GateKind::C,
        GateKind::D,
    ];

    /// Fixed arity, or `None` for the variable-width `S1`.
    pub fn arity(self) -> Option<usize> {
        use GateKind::*;
        match self {
            X | Z | H | RX | RZ | RY | A | B | C | D => Some(1),
            CNOT | CZ | CH | ISwap => Some(2),
            CCX => Some(3),
            S1 => None,
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            GateKind::RX | GateKind::RZ | GateKind::RY => 1,
            _ => 0,
        }
    }

    pub fn is_native(self) -> bool {
        matches!(self, GateKind::RX | GateKind::RZ | GateKind::ISwap)
    }

    pub fn name(self) -> &'static str {
        use GateKind::*;
        match self {
            X => "X",
            Z => "Z",
            H => "H",
            CNOT => "CNOT",
            CZ => "CZ",
            CH => "CH",
            CCX => "CCX",
            S1 => "S1",
            RX => "RX",
            RZ => "RZ",
            RY => "RY",
            ISwap => "ISWAP",
            A => "A",
            B => "B",
            C => "C",
            D => "D",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GateKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase();
        GateKind::ALL
            .into_iter()
            .find(|k| k.name() == up)
            .ok_or_else(|| Error::arg(format!("unknown gate kind {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    #[serde(default)]
    pub params: Vec<f64>,
    pub qubits: Vec<usize>,
}

impl GateOp {
    pub fn new(kind: GateKind, params: Vec<f64>, qubits: Vec<usize>) -> Result<Self> {
        let op = GateOp {
            kind,
            params,
            qubits,
        };
        op.validate()?;
        Ok(op)
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind.arity() {
            Some(a) if a != self.qubits.len() => {
                return Err(Error::arg(format!(
                    "{} takes {a} qubits, got {}",
                    self.kind,
                    self.qubits.len()
                )))
            }
            None if self.qubits.is_empty() => return Err(Error::arg("S1 on zero qubits")),
            _ => {}
        }
        if self.params.len() != self.kind.param_count() {
            return Err(Error::arg(format!(
                "{} takes {} parameters, got {}",
                self.kind,
                self.kind.param_count(),
                self.params.len()
            )));
        }
        if self.params.iter().any(|p| !p.is_finite()) {
            return Err(Error::arg("non-finite gate parameter"));
        }
        let max = self.qubits.iter().max().copied().unwrap_or(0);
        check_targets(max + 1, &self.qubits)
    }

    pub(crate) fn fixed(kind: GateKind, qubits: &[usize]) -> Self {
        GateOp {
            kind,
            params: Vec::new(),
            qubits: qubits.to_vec(),
        }
    }

    pub(crate) fn rot(kind: GateKind, theta: f64, qubit: usize) -> Self {
        GateOp {
            kind,
            params: vec![theta],
            qubits: vec![qubit],
        }
    }

    pub fn theta(&self) -> f64 {
        self.params.first().copied().unwrap_or(0.0)
    }

    pub fn matrix(&self) -> GateMatrix {
        use GateKind::*;
        match self.kind {
            X => gates::x(),
            Z => gates::z(),
            H => gates::h(),
            CNOT => gates::cnot(),
            CZ => gates::cz(),
            CH => gates::ch(),
            CCX => gates::ccx(),
            S1 => GateMatrix::PhaseFlip {
                arity: self.qubits.len(),
            },
            RX => gates::rx(self.theta()),
            RZ => gates::rz(self.theta()),
            RY => gates::ry(self.theta()),
            ISwap => gates::iswap(),
            A => gates::gate_a(),
            B => gates::gate_b(),
            C => gates::gate_c(),
            D => gates::gate_d(),
        }
    }

    /// Ops (in application order) realizing this op's exact inverse.
    pub fn inverse(&self) -> Vec<GateOp> {
        use GateKind::*;
        let q = &self.qubits;
        match self.kind {
            X | Z | H | CNOT | CZ | CH | CCX | S1 => vec![self.clone()],
            RX | RZ | RY => vec![GateOp::rot(self.kind, -self.theta(), q[0])],
            // A† = Z·A
            A => vec![GateOp::fixed(A, q), GateOp::fixed(Z, q)],
            B => vec![GateOp::rot(RY, -FRAC_PI_4, q[0])],
            // C† = Z·B†·A† = Z·RY(-π/4)·Z·A
            C => vec![
                GateOp::fixed(A, q),
                GateOp::fixed(Z, q),
                GateOp::rot(RY, -FRAC_PI_4, q[0]),
                GateOp::fixed(Z, q),
            ],
            // D† = A·D
            D => vec![GateOp::fixed(D, q), GateOp::fixed(A, q)],
            // iSWAP† = iSWAP·(Z⊗Z)
            ISwap => vec![
                GateOp::fixed(Z, &q[..1]),
                GateOp::fixed(Z, &q[1..]),
                self.clone(),
            ],
        }
    }

    /// Same op with qubit indices mapped through `f`.
    pub fn remapped(&self, f: impl Fn(usize) -> usize) -> GateOp {
        GateOp {
            kind: self.kind,
            params: self.params.clone(),
            qubits: self.qubits.iter().map(|&q| f(q)).collect(),
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(t) = self.params.first() {
            write!(f, "({:.6})", t)?;
        }
        write!(f, " {:?}", self.qubits)
    }
}

/// Canonical angle in `(-π, π]`.
pub fn canonical_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_system: usize,
    #[serde(default)]
    pub n_ancilla: usize,
    pub ops: Vec<GateOp>,
    /// Ancilla indices measured at the end, in record order.
    #[serde(default)]
    pub measured: Vec<usize>,
}

impl Circuit {
    pub fn new(n_system: usize, n_ancilla: usize) -> Result<Self> {
        if n_system == 0 {
            return Err(Error::arg("circuit needs at least one system qubit"));
        }
        Ok(Circuit {
            n_system,
            n_ancilla,
            ops: Vec::new(),
            measured: Vec::new(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_system + self.n_ancilla
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate()?;
        check_targets(self.n_qubits(), &op.qubits)?;
        self.ops.push(op);
        Ok(())
    }

    pub fn extend(&mut self, ops: impl IntoIterator<Item = GateOp>) -> Result<()> {
        for op in ops {
            self.push(op)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_system == 0 {
            return Err(Error::arg("circuit needs at least one system qubit"));
        }
        for op in &self.ops {
            op.validate()?;
            check_targets(self.n_qubits(), &op.qubits)?;
        }
        for (i, &m) in self.measured.iter().enumerate() {
            if m < self.n_system || m >= self.n_qubits() {
                return Err(Error::arg(format!("measured qubit {m} is not an ancilla")));
            }
            if self.measured[..i].contains(&m) {
                return Err(Error::arg(format!("qubit {m} measured twice")));
            }
        }
        Ok(())
    }

    /// Gate sequence of the exact inverse (measurements dropped).
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_system: self.n_system,
            n_ancilla: self.n_ancilla,
            ops: self.ops.iter().rev().flat_map(GateOp::inverse).collect(),
            measured: Vec::new(),
        }
    }

    /// `self` followed by `other` on a register wide enough for both.
    pub fn then(&self, other: &Circuit) -> Circuit {
        Circuit {
            n_system: self.n_system.max(other.n_system),
            n_ancilla: (self.n_qubits().max(other.n_qubits())) - self.n_system.max(other.n_system),
            ops: self.ops.iter().chain(&other.ops).cloned().collect(),
            measured: self.measured.iter().chain(&other.measured).copied().collect(),
        }
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.ops.iter().filter(|op| op.kind == kind).count()
    }

    /// Reads either a full circuit object or a bare op list.
    pub fn from_json(text: &str) -> Result<Circuit> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Full(Circuit),
            Ops(Vec<GateOp>),
        }
        let circuit = match serde_json::from_str::<Either>(text)? {
            Either::Full(c) => c,
            Either::Ops(ops) => {
                let width = ops
                    .iter()
                    .flat_map(|op| op.qubits.iter())
                    .max()
                    .map_or(1, |m| m + 1);
                Circuit {
                    n_system: width,
                    n_ancilla: 0,
                    ops,
                    measured: Vec::new(),
                }
            }
        };
        circuit.validate()?;
        Ok(circuit)
    }
}
