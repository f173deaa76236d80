//! Native gate counts and durations under the default hardware constants.

use dfsprep::basis::build_basis_matrix;
use dfsprep::circuit::{preparation_circuit, ControlStrategy};
use dfsprep::hw::{estimate_resources, gate_table, transpile, HardwareParams};

fn main() -> dfsprep::Result<()> {
    let params = HardwareParams::default();
    println!("{:<8} {:>6} {:>6} {:>10}", "gate", "iswap", "1q", "ns");
    for row in gate_table(&params, &[4, 5, 6, 7, 8])? {
        println!(
            "{:<8} {:>6} {:>6} {:>10.1}",
            row.gate, row.iswap_count, row.single_qubit_count, row.duration_ns
        );
    }

    let (basis, _) = build_basis_matrix(4)?;
    for (k1, strategy) in [
        (1, ControlStrategy::GateWise),
        (2, ControlStrategy::GateWise),
        (2, ControlStrategy::Conjugated),
    ] {
        let native = transpile(&preparation_circuit(basis.pairings(), k1, strategy)?)?;
        let est = estimate_resources(&native, &params);
        println!(
            "u_{k1} ({strategy:?}): {} qubits, {} iSWAPs, {:.1} ns",
            native.n_qubits(),
            est.iswap_count,
            est.duration_ns
        );
    }
    Ok(())
}
