use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::native::{mat_mul, Lowering, Mat2, NativeCircuit};
use crate::circuit::{Circuit, GateKind, GateOp};
use crate::error::{Error, Result};
use crate::gates::{self, GateMatrix};

fn mat2(g: &GateMatrix) -> Mat2 {
    let m = g.to_dense();
    [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

/// Product of single-qubit gates given in circuit order.
fn seq(gs: &[GateMatrix]) -> Mat2 {
    gs.iter()
        .fold(mat2(&gates::phase(0.0)), |acc, g| mat_mul(&mat2(g), &acc))
}

fn s() -> GateMatrix {
    gates::phase(FRAC_PI_2)
}

fn sdg() -> GateMatrix {
    gates::phase(-FRAC_PI_2)
}

/// Expands logical gates into native ops, allocating work ancillas from
/// `work_base` upwards.
struct Emitter {
    low: Lowering,
    work_base: usize,
    work_used: usize,
    toffolis: usize,
}

impl Emitter {
    fn new(work_base: usize) -> Self {
        Emitter {
            low: Lowering::default(),
            work_base,
            work_used: 0,
            toffolis: 0,
        }
    }

    fn one(&mut self, q: usize, g: &GateMatrix) {
        self.low.one(q, &mat2(g));
    }

    fn op(&mut self, op: &GateOp) -> Result<()> {
        use GateKind::*;
        op.validate()?;
        let q = &op.qubits;
        match op.kind {
            RZ => self.low.rz(q[0], op.theta()),
            RX => self.low.rx(q[0], op.theta()),
            RY => self.ry(q[0], op.theta()),
            ISwap => self.low.iswap(q[0], q[1]),
            X => self.low.rx(q[0], PI),
            Z => self.low.rz(q[0], PI),
            H => {
                self.low.rz(q[0], FRAC_PI_2);
                self.low.rx(q[0], FRAC_PI_2);
                self.low.rz(q[0], FRAC_PI_2);
            }
            A => self.low.rz(q[0], FRAC_PI_2),
            B => {
                self.low.rz(q[0], -FRAC_PI_2);
                self.low.rx(q[0], FRAC_PI_4);
                self.low.rz(q[0], FRAC_PI_2);
            }
            C => {
                self.low.rz(q[0], FRAC_PI_2);
                self.low.rx(q[0], FRAC_PI_4);
                self.low.rz(q[0], PI);
            }
            D => self.low.rz(q[0], -FRAC_PI_4),
            CNOT => self.cnot(q[0], q[1]),
            CZ => self.cz(q[0], q[1]),
            CH => {
                self.ry(q[1], -FRAC_PI_4);
                self.cz(q[0], q[1]);
                self.ry(q[1], FRAC_PI_4);
            }
            CCX => self.toffoli(q[0], q[1], q[2], true),
            S1 => self.phase_flip(q)?,
        }
        Ok(())
    }

    fn ry(&mut self, q: usize, theta: f64) {
        self.low.rz(q, FRAC_PI_2);
        self.low.rx(q, -theta);
        self.low.rz(q, -FRAC_PI_2);
    }

    /// Two-iSWAP CNOT with the single-qubit layers fused.
    fn cnot(&mut self, c: usize, t: usize) {
        let (h, x) = (gates::h(), gates::x());
        self.low.one(c, &seq(&[h.clone(), x.clone()]));
        self.low.one(t, &seq(&[x.clone(), h.clone(), x.clone()]));
        self.low.iswap(c, t);
        self.one(t, &h);
        self.low.iswap(c, t);
        self.low.one(c, &seq(&[h.clone(), s()]));
        self.low.one(t, &seq(&[s(), x, h]));
    }

    fn cz(&mut self, c: usize, t: usize) {
        self.one(t, &gates::h());
        self.cnot(c, t);
        self.one(t, &gates::h());
    }

    /// CNOT(x→y) followed by SWAP(x, y): one iSWAP.
    fn cnot_swap(&mut self, x: usize, y: usize) {
        self.low.one(y, &seq(&[gates::h(), sdg()]));
        self.low.one(x, &seq(&[sdg()]));
        self.low.iswap(x, y);
        self.one(x, &gates::h());
    }

    /// Six-CNOT Toffoli in which both CNOTs between the two lower wires carry
    /// a SWAP, so each costs one iSWAP. Wires are relabeled in between and
    /// end where they started. `with_h = false` gives CCZ.
    fn toffoli(&mut self, a: usize, b: usize, c: usize, with_h: bool) {
        self.toffolis += 1;
        let (t, tdg) = (gates::phase(FRAC_PI_4), gates::phase(-FRAC_PI_4));
        let (mut wb, mut wc) = (b, c);
        if with_h {
            self.one(wc, &gates::h());
        }
        self.cnot_swap(wb, wc);
        std::mem::swap(&mut wb, &mut wc);
        self.one(wc, &tdg);
        self.cnot(a, wc);
        self.one(wc, &t);
        self.cnot_swap(wb, wc);
        std::mem::swap(&mut wb, &mut wc);
        self.one(wc, &tdg);
        self.cnot(a, wc);
        self.one(wb, &t);
        self.one(wc, &t);
        if with_h {
            self.one(wc, &gates::h());
        }
        self.cnot(a, wb);
        self.one(a, &t);
        self.one(wb, &tdg);
        self.cnot(a, wb);
    }

    fn phase_flip(&mut self, q: &[usize]) -> Result<()> {
        match q.len() {
            1 => self.low.rz(q[0], PI),
            2 => self.cz(q[0], q[1]),
            3 => self.toffoli(q[0], q[1], q[2], false),
            n => {
                let work: Vec<usize> = (0..n - 3).map(|j| self.work_base + j).collect();
                self.work_used = self.work_used.max(n - 3);
                let mut ladder = vec![(q[0], q[1], work[0])];
                for j in 1..n - 3 {
                    ladder.push((work[j - 1], q[j + 1], work[j]));
                }
                for &(a, b, c) in &ladder {
                    self.toffoli(a, b, c, true);
                }
                self.toffoli(work[n - 4], q[n - 2], q[n - 1], false);
                for &(a, b, c) in ladder.iter().rev() {
                    self.toffoli(a, b, c, true);
                }
            }
        }
        Ok(())
    }

    fn finish(self, n_data: usize) -> NativeCircuit {
        let ancillas: Vec<usize> = (self.work_base..self.work_base + self.work_used).collect();
        let ops = self.low.finish(n_data + ancillas.len());
        NativeCircuit {
            n_system: n_data,
            n_data,
            ancillas,
            ops,
            measured: Vec::new(),
            toffolis: self.toffolis,
        }
    }
}

/// Native expansion of one gate on a register just wide enough for it.
pub fn decompose_gate(op: &GateOp) -> Result<NativeCircuit> {
    op.validate()?;
    let width = op.qubits.iter().max().map_or(1, |m| m + 1);
    let mut e = Emitter::new(width);
    e.op(op)?;
    Ok(e.finish(width))
}

/// `I - 2|1…1⟩⟨1…1|` on qubits `0..n`, with work ancillas `n..2n-3` for
/// `n ≥ 4`.
pub fn synthesize_multiqubit_phase(n: usize) -> Result<NativeCircuit> {
    if n < 2 {
        return Err(Error::arg(format!("phase gate synthesis needs n >= 2, got {n}")));
    }
    let qubits: Vec<usize> = (0..n).collect();
    decompose_gate(&GateOp::new(GateKind::S1, Vec::new(), qubits)?)
}

/// Gate-by-gate expansion of `circuit`; work ancillas are appended after the
/// circuit's own register and shared between phase gates.
pub fn transpile(circuit: &Circuit) -> Result<NativeCircuit> {
    circuit.validate()?;
    let n = circuit.n_qubits();
    let mut e = Emitter::new(n);
    for op in &circuit.ops {
        e.op(op)?;
    }
    let mut native = e.finish(n);
    native.n_system = circuit.n_system;
    native.measured = circuit.measured.clone();
    Ok(native)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hw::verify_equivalence;

    fn single(kind: GateKind, qubits: &[usize]) -> Circuit {
        let mut c = Circuit::new(qubits.iter().max().unwrap() + 1, 0).unwrap();
        c.push(GateOp::new(kind, vec![0.0; kind.param_count()], qubits.to_vec()).unwrap())
            .unwrap();
        c
    }

    #[test]
    fn every_kind_is_equivalent() {
        for kind in GateKind::ALL {
            let qubits: Vec<usize> = match kind.arity() {
                Some(1) => vec![0],
                Some(2) => vec![1, 0],
                Some(3) => vec![2, 0, 1],
                _ => vec![3, 0, 2, 1],
            };
            let mut c = single(kind, &qubits);
            if kind.param_count() == 1 {
                c.ops[0].params = vec![0.7];
            }
            let native = transpile(&c).unwrap();
            native.validate().unwrap();
            let d = verify_equivalence(&c, &native).unwrap();
            assert!(d < 1e-10, "{kind}: {d}");
        }
    }

    #[test]
    fn two_qubit_counts() {
        for kind in [GateKind::CNOT, GateKind::CZ, GateKind::CH] {
            let n = decompose_gate(&GateOp::fixed(kind, &[0, 1])).unwrap();
            assert_eq!(n.iswap_count(), 2, "{kind}");
        }
        let h = decompose_gate(&GateOp::fixed(GateKind::H, &[0])).unwrap();
        assert_eq!(h.ops.len(), 3);
        assert!(decompose_gate(&GateOp::rot(GateKind::RZ, 0.0, 0)).unwrap().ops.is_empty());
        assert_eq!(decompose_gate(&GateOp::fixed(GateKind::CCX, &[0, 1, 2])).unwrap().iswap_count(), 10);
    }

    #[test]
    fn phase_gate_ladder() {
        assert!(synthesize_multiqubit_phase(1).is_err());
        for n in 2..=8 {
            let s = synthesize_multiqubit_phase(n).unwrap();
            let expect_anc = n.saturating_sub(3);
            assert_eq!(s.ancillas.len(), expect_anc);
            if n >= 4 {
                assert_eq!(s.toffolis, 2 * n - 5);
                assert_eq!(s.iswap_count(), 20 * n - 50);
            }
        }
    }
}
