//! Lowers a four-qubit round circuit to RX/RZ/iSWAP and checks it against
//! the original unitary.

use dfsprep::circuit::{ControlStrategy, GateKind};
use dfsprep::hw::{estimate_resources, transpile, verify_equivalence, HardwareParams};
use dfsprep::orthogonalizer::Orthogonalizer;

fn main() -> dfsprep::Result<()> {
    let orth = Orthogonalizer::new(4)?;
    let params = HardwareParams::default();
    for strategy in [ControlStrategy::Conjugated, ControlStrategy::GateWise] {
        let round = orth.round_circuit(2, strategy)?;
        let native = transpile(&round)?;
        let est = estimate_resources(&native, &params);
        println!(
            "{strategy:?}: {} logical ops ({} CNOT, {} S1) -> {} native ops on {} qubits, {} work ancillas",
            round.ops.len(),
            round.count(GateKind::CNOT),
            round.count(GateKind::S1),
            native.ops.len(),
            native.n_qubits(),
            native.ancillas.len()
        );
        println!(
            "    {} iSWAPs, {} single-qubit rotations, {:.1} ns, distance {:.2e}",
            est.iswap_count,
            est.single_qubit_count,
            est.duration_ns,
            verify_equivalence(&round, &native)?
        );
    }
    Ok(())
}
