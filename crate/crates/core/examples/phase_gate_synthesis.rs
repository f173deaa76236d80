//! Multi-qubit phase gate from a Toffoli ladder with work ancillas.

use dfsprep::circuit::{Circuit, GateKind, GateOp};
use dfsprep::hw::{equivalence_distance, estimate_resources, synthesize_multiqubit_phase, HardwareParams};

fn main() -> dfsprep::Result<()> {
    let params = HardwareParams::default();
    println!("{:>2} {:>8} {:>8} {:>6} {:>9} {:>10}", "n", "Toffoli", "ancilla", "iSWAP", "ns", "distance");
    for n in 2..=8 {
        let native = synthesize_multiqubit_phase(n)?;
        let mut logical = Circuit::new(n, 0)?;
        logical.push(GateOp::new(GateKind::S1, vec![], (0..n).collect())?)?;
        let est = estimate_resources(&native, &params);
        println!(
            "{n:>2} {:>8} {:>8} {:>6} {:>9.1} {:>10.2e}",
            native.toffolis,
            native.ancillas.len(),
            est.iswap_count,
            est.duration_ns,
            equivalence_distance(&logical, &native, 1)?
        );
    }
    Ok(())
}
