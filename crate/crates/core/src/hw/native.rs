use serde::{Deserialize, Serialize};

use crate::circuit::{canonical_angle, Circuit, GateKind, GateOp};
use crate::error::{Error, Result};
use crate::statevector::C64;

/// Angles closer to zero than this are dropped.
pub const ANGLE_EPS: f64 = 1e-12;

/// A circuit over `{RX, RZ, iSWAP}` only.
///
/// Qubits `0..n_data` mirror the source circuit's register (of which the
/// first `n_system` are system qubits); `ancillas` lists the appended work
/// qubits, which start and must end in `|0⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NativeCircuit {
    pub n_system: usize,
    pub n_data: usize,
    pub ancillas: Vec<usize>,
    pub ops: Vec<GateOp>,
    /// Measured source ancillas, carried through unchanged.
    #[serde(default)]
    pub measured: Vec<usize>,
    /// Toffoli-equivalents expanded while building this circuit.
    #[serde(default)]
    pub toffolis: usize,
}

impl NativeCircuit {
    pub fn empty(n_data: usize) -> Self {
        NativeCircuit {
            n_system: n_data,
            n_data,
            ancillas: Vec::new(),
            ops: Vec::new(),
            measured: Vec::new(),
            toffolis: 0,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_data + self.ancillas.len()
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.ops.iter().filter(|op| op.kind == kind).count()
    }

    pub fn iswap_count(&self) -> usize {
        self.count(GateKind::ISwap)
    }

    pub fn validate(&self) -> Result<()> {
        for op in &self.ops {
            if !op.kind.is_native() {
                return Err(Error::arg(format!("{} is not a native gate", op.kind)));
            }
            op.validate()?;
            if op.qubits.iter().any(|&q| q >= self.n_qubits()) {
                return Err(Error::arg(format!("{op} exceeds the register")));
            }
            if let Some(&t) = op.params.first() {
                if t != canonical_angle(t) {
                    return Err(Error::arg(format!("angle {t} is not canonical")));
                }
            }
        }
        Ok(())
    }

    /// Same ops as a generic circuit; work ancillas follow the source
    /// ancillas.
    pub fn to_circuit(&self) -> Circuit {
        Circuit {
            n_system: self.n_system,
            n_ancilla: self.n_qubits() - self.n_system,
            ops: self.ops.clone(),
            measured: self.measured.clone(),
        }
    }
}

pub type Mat2 = [C64; 4];

pub(crate) fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

/// Angles `(γ, β, α)` with `U ∝ RZ(α)·RX(β)·RZ(γ)` and `β ∈ [0, π]`;
/// applied in circuit order RZ(γ), RX(β), RZ(α).
pub fn zxz_angles(u: &Mat2) -> (f64, f64, f64) {
    let det = u[0] * u[3] - u[1] * u[2];
    let s = det.sqrt();
    let v = [u[0] / s, u[1] / s, u[2] / s, u[3] / s];
    let (ma, mb) = (v[0].norm(), v[1].norm());
    let beta = 2.0 * mb.atan2(ma);
    // v00 = cos(β/2) e^{-i(α+γ)/2}, v01 = -i sin(β/2) e^{-i(α-γ)/2}
    let sum = if ma > 1e-14 { -2.0 * v[0].arg() } else { 0.0 };
    let diff = if mb > 1e-14 {
        -2.0 * v[1].arg() - std::f64::consts::PI
    } else {
        0.0
    };
    let alpha = (sum + diff) / 2.0;
    let gamma = (sum - diff) / 2.0;
    (canonical_angle(gamma), beta, canonical_angle(alpha))
}

/// Lowers single-qubit unitaries and iSWAPs to a native op list.
#[derive(Clone, Debug, Default)]
pub(crate) struct Lowering {
    ops: Vec<GateOp>,
}

impl Lowering {
    pub fn one(&mut self, q: usize, m: &Mat2) {
        let (gamma, beta, alpha) = zxz_angles(m);
        self.rz(q, gamma);
        if beta.abs() > ANGLE_EPS {
            self.ops.push(GateOp::rot(GateKind::RX, canonical_angle(beta), q));
        }
        self.rz(q, alpha);
    }

    pub fn rz(&mut self, q: usize, theta: f64) {
        if canonical_angle(theta).abs() > ANGLE_EPS {
            self.ops.push(GateOp::rot(GateKind::RZ, canonical_angle(theta), q));
        }
    }

    pub fn rx(&mut self, q: usize, theta: f64) {
        if canonical_angle(theta).abs() > ANGLE_EPS {
            self.ops.push(GateOp::rot(GateKind::RX, canonical_angle(theta), q));
        }
    }

    pub fn iswap(&mut self, a: usize, b: usize) {
        self.ops.push(GateOp::fixed(GateKind::ISwap, &[a, b]));
    }

    /// Native ops with consecutive RZs on a qubit folded together.
    pub fn finish(self, n_qubits: usize) -> Vec<GateOp> {
        merge_rz(self.ops, n_qubits)
    }
}

/// Folds each qubit's consecutive RZs into one (dropping identities). A
/// pending RZ is emitted just before the next op that touches its qubit.
pub fn merge_rz(ops: Vec<GateOp>, n_qubits: usize) -> Vec<GateOp> {
    let mut pending = vec![0.0f64; n_qubits];
    let mut out = Vec::with_capacity(ops.len());
    let flush = |q: usize, pending: &mut [f64], out: &mut Vec<GateOp>| {
        let t = canonical_angle(pending[q]);
        if t.abs() > ANGLE_EPS {
            out.push(GateOp::rot(GateKind::RZ, t, q));
        }
        pending[q] = 0.0;
    };
    for op in ops {
        if op.kind == GateKind::RZ {
            pending[op.qubits[0]] += op.theta();
            continue;
        }
        for &q in &op.qubits {
            flush(q, &mut pending, &mut out);
        }
        out.push(op);
    }
    for q in 0..n_qubits {
        flush(q, &mut pending, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;

    fn as_mat2(g: &gates::GateMatrix) -> Mat2 {
        let m = g.to_dense();
        [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
    }

    fn rebuild(u: &Mat2) -> Mat2 {
        let (g, b, a) = zxz_angles(u);
        let rz = |t| as_mat2(&gates::rz(t));
        let rx = |t| as_mat2(&gates::rx(t));
        mat_mul(&rz(a), &mat_mul(&rx(b), &rz(g)))
    }

    fn phase_dist(u: &Mat2, v: &Mat2) -> f64 {
        let tr = v[0].conj() * u[0] + v[1].conj() * u[1] + v[2].conj() * u[2] + v[3].conj() * u[3];
        let ph = tr / tr.norm();
        (0..4).map(|i| (u[i] - v[i] * ph).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn euler_round_trip() {
        let cases = [
            gates::h(),
            gates::x(),
            gates::z(),
            gates::gate_a(),
            gates::gate_b(),
            gates::gate_c(),
            gates::gate_d(),
            gates::ry(0.3),
            gates::rx(-2.0),
            gates::phase(1.0),
        ];
        for g in &cases {
            let m = as_mat2(g);
            assert!(phase_dist(&rebuild(&m), &m) < 1e-12, "{g:?}");
        }
    }

    #[test]
    fn hadamard_angles() {
        let (g, b, a) = zxz_angles(&as_mat2(&gates::h()));
        let h = std::f64::consts::FRAC_PI_2;
        assert!((g - h).abs() < 1e-12 && (b - h).abs() < 1e-12 && (a - h).abs() < 1e-12);
    }

    #[test]
    fn rz_runs_merge() {
        let ops = vec![
            GateOp::rot(GateKind::RZ, 0.5, 0),
            GateOp::rot(GateKind::RZ, 0.25, 1),
            GateOp::rot(GateKind::RZ, -0.5, 0),
            GateOp::fixed(GateKind::ISwap, &[0, 1]),
            GateOp::rot(GateKind::RZ, 3.0, 1),
            GateOp::rot(GateKind::RZ, 3.0, 1),
        ];
        let merged = merge_rz(ops, 2);
        assert_eq!(merged.len(), 3);
        assert_eq!(merged[0], GateOp::rot(GateKind::RZ, 0.25, 1));
        assert_eq!(merged[1].kind, GateKind::ISwap);
        assert!((merged[2].theta() - canonical_angle(6.0)).abs() < 1e-15);
    }
}
