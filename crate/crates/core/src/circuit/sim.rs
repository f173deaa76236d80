use nalgebra::DMatrix;
use rand::Rng;

use super::Circuit;
use crate::error::{Error, Result};
use crate::statevector::{apply_in_place, measure_qubits, QuantumState, RawVector, C64, MAX_QUBITS};

/// Largest joint register `unitary_of` will expand.
pub const MAX_UNITARY_QUBITS: usize = 12;

#[derive(Clone, Debug)]
pub struct SimulationOutcome {
    /// Post-measurement state of the whole register.
    pub joint: QuantumState,
    /// One bit per entry of `circuit.measured`.
    pub record: Vec<u8>,
    /// Born probability of `record`.
    pub probability: f64,
    n_system: usize,
    measured: Vec<usize>,
}

impl SimulationOutcome {
    pub fn all_zero(&self) -> bool {
        self.record.iter().all(|&b| b == 0)
    }

    /// System register state, assuming every non-system qubit is left in a
    /// definite value (measured ancillas at their record, the rest at 0).
    pub fn system_state(&self) -> Result<QuantumState> {
        let n = self.joint.n_qubits();
        let extra = n - self.n_system;
        let mut anc = 0usize;
        for (&q, &bit) in self.measured.iter().zip(&self.record) {
            if bit == 1 {
                anc |= 1 << (n - 1 - q);
            }
        }
        let amps: Vec<C64> = (0..1usize << self.n_system)
            .map(|s| self.joint.amplitude((s << extra) | anc))
            .collect();
        let raw = RawVector::new(amps)?;
        if (raw.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::arg(format!(
                "system register is entangled with ancillas (slice norm {:.3e})",
                raw.norm()
            )));
        }
        raw.normalize()
    }
}

/// `input ⊗ |0…0⟩` on the circuit's full register.
pub fn embed_input(circuit: &Circuit, input: &QuantumState) -> Result<QuantumState> {
    if input.n_qubits() != circuit.n_system {
        return Err(Error::arg(format!(
            "input has {} qubits, circuit system register has {}",
            input.n_qubits(),
            circuit.n_system
        )));
    }
    if circuit.n_qubits() > MAX_QUBITS {
        return Err(Error::Resource(format!(
            "{} qubits exceeds the simulator limit of {MAX_QUBITS}",
            circuit.n_qubits()
        )));
    }
    if circuit.n_ancilla == 0 {
        return Ok(input.clone());
    }
    input.tensor(&QuantumState::zero(circuit.n_ancilla)?)
}

/// Applies every gate of `circuit` to a full-register amplitude buffer.
pub fn run_gates(circuit: &Circuit, amps: &mut [C64]) -> Result<()> {
    let n = circuit.n_qubits();
    for op in &circuit.ops {
        apply_in_place(amps, n, &op.matrix(), &op.qubits)?;
    }
    Ok(())
}

/// State right before the terminal measurements.
pub fn pre_measurement_state(circuit: &Circuit, input: &QuantumState) -> Result<QuantumState> {
    circuit.validate()?;
    let mut amps = embed_input(circuit, input)?.into_amplitudes();
    run_gates(circuit, &mut amps)?;
    Ok(QuantumState::from_raw_parts(circuit.n_qubits(), amps))
}

/// Runs `circuit` on `input` (ancillas in `|0⟩`) and samples the terminal
/// measurements.
pub fn simulate<R: Rng + ?Sized>(
    circuit: &Circuit,
    input: &QuantumState,
    rng: &mut R,
) -> Result<SimulationOutcome> {
    let joint = pre_measurement_state(circuit, input)?;
    sample_measurements(circuit, &joint, rng)
}

/// Samples the circuit's measurements on an already-evolved joint state.
pub fn sample_measurements<R: Rng + ?Sized>(
    circuit: &Circuit,
    joint: &QuantumState,
    rng: &mut R,
) -> Result<SimulationOutcome> {
    let (joint, record, probability) = if circuit.measured.is_empty() {
        (joint.clone(), Vec::new(), 1.0)
    } else {
        let m = measure_qubits(joint, &circuit.measured, rng)?;
        (m.collapsed, m.bits, m.probability)
    };
    Ok(SimulationOutcome {
        joint,
        record,
        probability,
        n_system: circuit.n_system,
        measured: circuit.measured.clone(),
    })
}

/// Unnormalized system state on the branch where every non-system qubit
/// reads 0; its squared norm is that branch's probability.
pub fn zero_branch(joint: &QuantumState, n_system: usize) -> Result<RawVector> {
    let extra = joint.n_qubits() - n_system;
    RawVector::new(
        (0..1usize << n_system)
            .map(|s| joint.amplitude(s << extra))
            .collect(),
    )
}

/// Dense unitary of the gate sequence (terminal measurements ignored).
pub fn unitary_of(circuit: &Circuit) -> Result<DMatrix<C64>> {
    circuit.validate()?;
    let n = circuit.n_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::Resource(format!(
            "{n} qubits exceeds the dense unitary cap of {MAX_UNITARY_QUBITS}"
        )));
    }
    let dim = 1usize << n;
    let mut u = DMatrix::zeros(dim, dim);
    let mut col = vec![C64::new(0.0, 0.0); dim];
    for j in 0..dim {
        col.fill(C64::new(0.0, 0.0));
        col[j] = C64::new(1.0, 0.0);
        run_gates(circuit, &mut col)?;
        u.set_column(j, &nalgebra::DVector::from_column_slice(&col));
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{pairing_to_state, Pairing};
    use crate::circuit::{orthogonalization_round_circuit, GateKind, GateOp};
    use crate::statevector::{fidelity, inner_product};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(pairs: &[(usize, usize)]) -> Pairing {
        Pairing::new(pairs.to_vec()).unwrap()
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(2, 0).unwrap();
        let s = QuantumState::normalized(vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.0),
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = simulate(&c, &s, &mut rng).unwrap();
        assert_eq!(out.joint, s);
        assert!(out.record.is_empty());
    }

    #[test]
    fn four_qubit_round_branch() {
        let a1 = p(&[(1, 2), (3, 4)]);
        let a2 = pairing_to_state(&p(&[(1, 3), (2, 4)])).unwrap();
        let round = orthogonalization_round_circuit(&[a1.clone()]).unwrap();
        let joint = pre_measurement_state(&round, &a2).unwrap();
        let branch = zero_branch(&joint, 4).unwrap();
        assert!((branch.norm().powi(2) - 0.75).abs() < 1e-12);
        let out = branch.normalize().unwrap();
        let a1s = pairing_to_state(&a1).unwrap();
        assert!(inner_product(&a1s, &out).unwrap().norm() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen_zero = false;
        for _ in 0..20 {
            let o = simulate(&round, &a2, &mut rng).unwrap();
            if o.all_zero() {
                seen_zero = true;
                assert!(fidelity(&o.system_state().unwrap(), &out).unwrap() > 1.0 - 1e-12);
            }
        }
        assert!(seen_zero);
    }

    #[test]
    fn unitary_cap_and_adjoint() {
        let mut c = Circuit::new(3, 0).unwrap();
        c.push(GateOp::fixed(GateKind::H, &[0])).unwrap();
        c.push(GateOp::fixed(GateKind::C, &[1])).unwrap();
        c.push(GateOp::fixed(GateKind::ISwap, &[1, 2])).unwrap();
        c.push(GateOp::fixed(GateKind::D, &[2])).unwrap();
        c.push(GateOp::fixed(GateKind::A, &[0])).unwrap();
        c.push(GateOp::rot(GateKind::RY, 0.4, 0)).unwrap();
        let both = c.then(&c.inverse());
        let u = unitary_of(&both).unwrap();
        let id = DMatrix::<C64>::identity(8, 8);
        assert!((u - id).iter().all(|z| z.norm() < 1e-10));
        let big = Circuit::new(13, 0).unwrap();
        assert!(matches!(unitary_of(&big), Err(Error::Resource(_))));
    }
}
