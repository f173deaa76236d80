//! Checks transpiled four-qubit circuits against a seven-qubit coupling
//! graph and lists the iSWAPs that need a non-existent edge.

use dfsprep::basis::build_basis_matrix;
use dfsprep::circuit::{preparation_circuit, ControlStrategy};
use dfsprep::hw::{check_coupling, transpile, violating_pairs, CouplingGraph};

fn main() -> dfsprep::Result<()> {
    let graph = CouplingGraph::seven_qubit_wheel();
    println!("edges: {:?}", graph.edges);
    let (basis, _) = build_basis_matrix(4)?;
    for k1 in [1, 2] {
        for strategy in [ControlStrategy::GateWise, ControlStrategy::Conjugated] {
            let native = transpile(&preparation_circuit(basis.pairings(), k1, strategy)?)?;
            if native.n_qubits() > graph.nodes.len() {
                println!("u_{k1} {strategy:?}: needs {} qubits, graph has {}", native.n_qubits(), graph.nodes.len());
                continue;
            }
            let violations = check_coupling(&native, &graph)?;
            println!(
                "u_{k1} {strategy:?}: {} of {} iSWAPs off-graph, pairs {:?}",
                violations.len(),
                native.iswap_count(),
                violating_pairs(&violations)
            );
        }
    }
    Ok(())
}
