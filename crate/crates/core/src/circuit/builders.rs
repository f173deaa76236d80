use serde::{Deserialize, Serialize};

use super::{Circuit, GateKind, GateOp};
use crate::basis::Pairing;
use crate::error::{Error, Result};

/// How the ancilla control is attached to a reflection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ControlStrategy {
    /// `O · X · S1(ctrl + system) · X · O†`: only the phase gate is controlled.
    #[default]
    Conjugated,
    /// Every gate carries the control (X→CNOT, Z→CZ, H→CH, CNOT→CCX,
    /// S1(n)→S1(n+1)).
    GateWise,
}

/// Ops mapping `|00⟩` on `(first, second)` to `(|01⟩ - |10⟩)/√2`.
pub fn singlet_prep_ops(first: usize, second: usize) -> Result<Vec<GateOp>> {
    if first == second {
        return Err(Error::arg(format!("singlet pair repeats qubit {first}")));
    }
    Ok(vec![
        GateOp::fixed(GateKind::X, &[second]),
        GateOp::fixed(GateKind::H, &[first]),
        GateOp::fixed(GateKind::CNOT, &[first, second]),
        GateOp::fixed(GateKind::Z, &[first]),
    ])
}

/// Singlet preparation on a register just wide enough for the pair.
pub fn singlet_prep_circuit(first: usize, second: usize) -> Result<Circuit> {
    let mut c = Circuit::new(first.max(second) + 1, 0)?;
    c.extend(singlet_prep_ops(first, second)?)?;
    Ok(c)
}

/// Prepares the pairing state from `|0…0⟩`.
pub fn basis_prep_circuit(pairing: &Pairing) -> Result<Circuit> {
    let mut c = Circuit::new(pairing.n_qubits(), 0)?;
    for (a, b) in pairing.qubit_pairs() {
        c.extend(singlet_prep_ops(a, b)?)?;
    }
    Ok(c)
}

/// `U = I - 2|a⟩⟨a|` for the pairing state `a`, optionally controlled by an
/// ancilla qubit.
pub fn reflection_circuit(pairing: &Pairing, control: Option<usize>) -> Result<Circuit> {
    reflection_circuit_with(pairing, control, ControlStrategy::default())
}

pub fn reflection_circuit_with(
    pairing: &Pairing,
    control: Option<usize>,
    strategy: ControlStrategy,
) -> Result<Circuit> {
    let n = pairing.n_qubits();
    let n_ancilla = match control {
        Some(c) if c < n => {
            return Err(Error::arg(format!(
                "control {c} lies inside the {n}-qubit system register"
            )))
        }
        Some(c) => c - n + 1,
        None => 0,
    };
    let mut circuit = Circuit::new(n, n_ancilla)?;
    circuit.extend(reflection_ops(pairing, control, strategy)?)?;
    Ok(circuit)
}

fn reflection_ops(
    pairing: &Pairing,
    control: Option<usize>,
    strategy: ControlStrategy,
) -> Result<Vec<GateOp>> {
    let n = pairing.n_qubits();
    let prep = basis_prep_circuit(pairing)?.ops;
    let system: Vec<usize> = (0..n).collect();
    let x_layer = system.iter().map(|&q| GateOp::fixed(GateKind::X, &[q]));
    let phase_qubits: Vec<usize> = control.into_iter().chain(system.iter().copied()).collect();

    let mut ops: Vec<GateOp> = Vec::new();
    // every prep gate is self-inverse, so O† is the reversed list
    ops.extend(prep.iter().rev().cloned());
    ops.extend(x_layer.clone());
    ops.push(GateOp::fixed(GateKind::S1, &phase_qubits));
    ops.extend(x_layer);
    ops.extend(prep);

    match (control, strategy) {
        (Some(c), ControlStrategy::GateWise) => ops.iter().map(|op| add_control(op, c)).collect(),
        _ => Ok(ops),
    }
}

fn add_control(op: &GateOp, control: usize) -> Result<GateOp> {
    use GateKind::*;
    let kind = match op.kind {
        X => CNOT,
        Z => CZ,
        H => CH,
        CNOT => CCX,
        S1 if op.qubits.contains(&control) => return Ok(op.clone()),
        S1 => S1,
        other => {
            return Err(Error::arg(format!(
                "no controlled form of {other} in the gate set"
            )))
        }
    };
    let qubits: Vec<usize> = std::iter::once(control).chain(op.qubits.iter().copied()).collect();
    GateOp::new(kind, Vec::new(), qubits)
}

/// One orthogonalization round: ancilla `n + i` wraps the controlled
/// reflection about prior `i` in Hadamards, and all ancillas are measured.
/// The all-zeros branch applies `P_k ⋯ P_1` to the system register.
pub fn orthogonalization_round_circuit(priors: &[Pairing]) -> Result<Circuit> {
    orthogonalization_round_circuit_with(priors, ControlStrategy::default())
}

pub fn orthogonalization_round_circuit_with(
    priors: &[Pairing],
    strategy: ControlStrategy,
) -> Result<Circuit> {
    let first = priors
        .first()
        .ok_or_else(|| Error::arg("a round needs at least one prior state"))?;
    let n = first.n_qubits();
    if priors.iter().any(|p| p.n_qubits() != n) {
        return Err(Error::arg("prior pairings act on different qubit counts"));
    }
    let k = priors.len();
    let mut circuit = Circuit::new(n, k)?;
    for (i, prior) in priors.iter().enumerate() {
        let anc = n + i;
        circuit.push(GateOp::fixed(GateKind::H, &[anc]))?;
        circuit.extend(reflection_ops(prior, Some(anc), strategy)?)?;
        circuit.push(GateOp::fixed(GateKind::H, &[anc]))?;
    }
    circuit.measured = (n..n + k).collect();
    Ok(circuit)
}

/// Full circuit producing `u_{k+1}` from `|0…0⟩`: prepares `a_{k+1}` and,
/// for `k ≥ 1`, applies one round against `a_1 … a_k`.
pub fn preparation_circuit(
    pairings: &[Pairing],
    k_plus_1: usize,
    strategy: ControlStrategy,
) -> Result<Circuit> {
    if k_plus_1 == 0 || k_plus_1 > pairings.len() {
        return Err(Error::arg(format!(
            "state index {k_plus_1} outside 1..={}",
            pairings.len()
        )));
    }
    let prep = basis_prep_circuit(&pairings[k_plus_1 - 1])?;
    if k_plus_1 == 1 {
        return Ok(prep);
    }
    let round = orthogonalization_round_circuit_with(&pairings[..k_plus_1 - 1], strategy)?;
    Ok(prep.then(&round))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::pairing_to_state;
    use crate::circuit::unitary_of;
    use crate::statevector::C64;
    use nalgebra::DMatrix;

    fn p(pairs: &[(usize, usize)]) -> Pairing {
        Pairing::new(pairs.to_vec()).unwrap()
    }

    fn max_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn singlet_column() {
        let u = unitary_of(&singlet_prep_circuit(0, 1).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((u[(1, 0)].re - h).abs() < 1e-12);
        assert!((u[(2, 0)].re + h).abs() < 1e-12);
        assert!(u[(0, 0)].norm() < 1e-12 && u[(3, 0)].norm() < 1e-12);
        assert_eq!(singlet_prep_circuit(0, 1).unwrap().ops.len(), 4);
        assert!(singlet_prep_circuit(1, 1).is_err());
    }

    #[test]
    fn reflection_matches_outer_product() {
        let pairing = p(&[(1, 2), (3, 4)]);
        let a = pairing_to_state(&pairing).unwrap();
        let v = DMatrix::from_column_slice(16, 1, a.amplitudes());
        let expect = DMatrix::<C64>::identity(16, 16) - (&v * v.adjoint()) * C64::new(2.0, 0.0);
        let u = unitary_of(&reflection_circuit(&pairing, None).unwrap()).unwrap();
        assert!(max_diff(&u, &expect) < 1e-10);
        assert!(max_diff(&(&u * &u), &DMatrix::identity(16, 16)) < 1e-12);
    }

    #[test]
    fn controlled_forms_agree() {
        let pairing = p(&[(1, 3), (2, 4)]);
        let a = reflection_circuit_with(&pairing, Some(4), ControlStrategy::Conjugated).unwrap();
        let b = reflection_circuit_with(&pairing, Some(4), ControlStrategy::GateWise).unwrap();
        let ua = unitary_of(&a).unwrap();
        let ub = unitary_of(&b).unwrap();
        assert!(max_diff(&ua, &ub) < 1e-10);
        // control is the least significant bit: even indices have it at |0⟩
        for col in (0..32).step_by(2) {
            for row in 0..32 {
                let expect = if row == col { 1.0 } else { 0.0 };
                assert!((ua[(row, col)] - C64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
        assert!(reflection_circuit(&pairing, Some(3)).is_err());
        assert!(b.count(GateKind::CH) > 0 && b.count(GateKind::CCX) > 0);
    }

    #[test]
    fn round_layout() {
        let c = orthogonalization_round_circuit(&[p(&[(1, 2), (3, 4)])]).unwrap();
        assert_eq!((c.n_system, c.n_ancilla), (4, 1));
        assert_eq!(c.measured, vec![4]);
        assert!(orthogonalization_round_circuit(&[]).is_err());
        assert!(orthogonalization_round_circuit(&[p(&[(1, 2)]), p(&[(1, 2), (3, 4)])]).is_err());
    }

    #[test]
    fn preparation_layout() {
        let ps = [p(&[(1, 2), (3, 4)]), p(&[(1, 4), (2, 3)])];
        let u1 = preparation_circuit(&ps, 1, ControlStrategy::GateWise).unwrap();
        assert_eq!((u1.n_system, u1.n_ancilla, u1.ops.len()), (4, 0, 8));
        let u2 = preparation_circuit(&ps, 2, ControlStrategy::GateWise).unwrap();
        assert_eq!((u2.n_system, u2.n_ancilla), (4, 1));
        assert_eq!(u2.measured, vec![4]);
        assert!(preparation_circuit(&ps, 3, ControlStrategy::GateWise).is_err());
        assert!(preparation_circuit(&ps, 0, ControlStrategy::GateWise).is_err());
    }
}
