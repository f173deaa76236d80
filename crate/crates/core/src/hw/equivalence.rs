use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::native::NativeCircuit;
use crate::circuit::{run_gates, unitary_of, Circuit, MAX_UNITARY_QUBITS};
use crate::error::{Error, Result};
use crate::statevector::C64;

const EXACT_SPECTRAL_DIM: usize = 512;
const POWER_ITERATIONS: usize = 300;
/// `equivalence_distance` switches to probes above this joint width.
pub const DENSE_DISTANCE_QUBITS: usize = 10;

fn check_widths(original: &Circuit, native: &NativeCircuit) -> Result<()> {
    if original.n_qubits() != native.n_data {
        return Err(Error::arg(format!(
            "original acts on {} qubits, native data register has {}",
            original.n_qubits(),
            native.n_data
        )));
    }
    native.validate()
}

/// Spectral-norm distance between the original unitary and the native
/// circuit's `|0⟩`-in/`|0⟩`-out work-ancilla block, after aligning global
/// phase through the trace. Joint register capped at 12 qubits.
pub fn verify_equivalence(original: &Circuit, native: &NativeCircuit) -> Result<f64> {
    check_widths(original, native)?;
    let joint = native.n_qubits();
    if joint > MAX_UNITARY_QUBITS {
        return Err(Error::Resource(format!(
            "{joint} joint qubits exceeds the dense equivalence cap of {MAX_UNITARY_QUBITS}"
        )));
    }
    let u = unitary_of(original)?;
    let block = ancilla_block(native)?;
    let tr: C64 = u.iter().zip(block.iter()).map(|(a, b)| a.conj() * b).sum();
    let phase = if tr.norm() > 1e-300 { tr / tr.norm() } else { C64::new(1.0, 0.0) };
    Ok(spectral_norm(&(block - u * phase)))
}

/// Data-register block of the native unitary with work ancillas fixed to
/// `|0⟩` on both sides.
pub fn ancilla_block(native: &NativeCircuit) -> Result<DMatrix<C64>> {
    let circuit = native.to_circuit();
    let extra = native.ancillas.len();
    let dim = 1usize << native.n_data;
    let mut out = DMatrix::zeros(dim, dim);
    let mut buf = vec![C64::new(0.0, 0.0); 1 << native.n_qubits()];
    for j in 0..dim {
        buf.fill(C64::new(0.0, 0.0));
        buf[j << extra] = C64::new(1.0, 0.0);
        run_gates(&circuit, &mut buf)?;
        for i in 0..dim {
            out[(i, j)] = buf[i << extra];
        }
    }
    Ok(out)
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.ncols() <= EXACT_SPECTRAL_DIM {
        let eig = (m.adjoint() * m).symmetric_eigenvalues();
        return eig.iter().fold(0.0f64, |a, &e| a.max(e)).max(0.0).sqrt();
    }
    let n = m.ncols();
    let mut v = DVector::from_fn(n, |i, _| C64::new(1.0 + (i as f64 * 0.618).sin() * 0.5, 0.0));
    v /= C64::new(v.norm(), 0.0);
    let mut lambda = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let w = m.ad_mul(&(m * &v));
        let norm = w.norm();
        if norm < 1e-300 {
            return 0.0;
        }
        lambda = norm;
        v = w / C64::new(norm, 0.0);
    }
    lambda.sqrt()
}

/// Probe-based variant for registers beyond the dense cap: runs both
/// circuits on `probes` random data states (native work ancillas in `|0⟩`)
/// and returns the largest output distance after one common phase
/// alignment. Leakage out of the work-ancilla zero block counts as error.
pub fn verify_equivalence_probes(
    original: &Circuit,
    native: &NativeCircuit,
    probes: usize,
    seed: u64,
) -> Result<f64> {
    check_widths(original, native)?;
    if probes == 0 {
        return Err(Error::arg("need at least one probe"));
    }
    let orig_circuit = Circuit {
        measured: Vec::new(),
        ..original.clone()
    };
    let nat_circuit = native.to_circuit();
    let extra = native.ancillas.len();
    let dim = 1usize << native.n_data;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(probes);
    for _ in 0..probes {
        let mut input: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = input.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        input.iter_mut().for_each(|z| *z /= norm);
        let mut o = input.clone();
        run_gates(&orig_circuit, &mut o)?;
        let mut n = vec![C64::new(0.0, 0.0); 1 << native.n_qubits()];
        for (i, z) in input.iter().enumerate() {
            n[i << extra] = *z;
        }
        run_gates(&nat_circuit, &mut n)?;
        pairs.push((o, n));
    }
    let overlap: C64 = pairs
        .iter()
        .flat_map(|(o, n)| o.iter().enumerate().map(move |(i, a)| a.conj() * n[i << extra]))
        .sum();
    let phase = if overlap.norm() > 1e-300 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let mut worst = 0.0f64;
    for (o, n) in &pairs {
        let mut sq = 0.0;
        for (idx, z) in n.iter().enumerate() {
            let reference = if idx & ((1 << extra) - 1) == 0 {
                o[idx >> extra] * phase
            } else {
                C64::new(0.0, 0.0)
            };
            sq += (z - reference).norm_sqr();
        }
        worst = worst.max(sq.sqrt());
    }
    Ok(worst)
}

/// Dense check when the joint register fits, probes otherwise.
pub fn equivalence_distance(original: &Circuit, native: &NativeCircuit, seed: u64) -> Result<f64> {
    if native.n_qubits() <= DENSE_DISTANCE_QUBITS {
        verify_equivalence(original, native)
    } else {
        verify_equivalence_probes(original, native, 8, seed)
    }
}
