//! Builds the preparation circuit for one basis state, saves it as JSON and
//! reloads it; the JSON file also feeds `dfsprep resources --circuit`.

use dfsprep::basis::build_basis_matrix;
use dfsprep::circuit::{pre_measurement_state, preparation_circuit, zero_branch, Circuit, ControlStrategy};
use dfsprep::statevector::{infidelity, QuantumState};

fn main() -> dfsprep::Result<()> {
    let (basis, _) = build_basis_matrix(4)?;
    let circuit = preparation_circuit(basis.pairings(), 2, ControlStrategy::Conjugated)?;
    let json = serde_json::to_string_pretty(&circuit)?;
    let back = Circuit::from_json(&json)?;
    assert_eq!(back, circuit);
    println!("{json}");

    let joint = pre_measurement_state(&back, &QuantumState::zero(back.n_system)?)?;
    let branch = zero_branch(&joint, back.n_system)?;
    let p = branch.norm().powi(2);
    let u2 = branch.normalize()?;
    let t2 = dfsprep::orthogonalizer::gram_schmidt_oracle(&basis)?[1].clone();
    eprintln!("p(all zeros) = {p:.4}, infidelity to t_2 = {:.1e}", infidelity(&u2, &t2)?);
    Ok(())
}
