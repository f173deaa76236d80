#![allow(dead_code)]

use dfsprep::basis::{enumerate_parens, pairing_to_parens, pairing_to_state, parens_to_pairing, ParenSequence};
use dfsprep::circuit::{orthogonalization_round_circuit, pre_measurement_state, zero_branch, simulate};
use dfsprep::orthogonalizer::project_chain;
use dfsprep::statevector::{
    inner_product, measure_qubits, outcome_probabilities, rank1_deflate, QuantumState, RawVector, C64,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PROPERTY_CASES: u32 = 1000;

/// Sparse ket from `(bitstring, coefficient)` terms times `scale`.
pub fn ket(terms: &[(&str, f64)], scale: f64) -> QuantumState {
    let n = terms[0].0.len();
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    for &(bits, c) in terms {
        amps[usize::from_str_radix(bits, 2).unwrap()] = C64::new(c * scale, 0.0);
    }
    QuantumState::from_amplitudes(amps).unwrap()
}

pub fn four_qubit_t2() -> QuantumState {
    ket(
        &[("0011", 2.0), ("0110", -1.0), ("1001", -1.0), ("0101", -1.0), ("1010", -1.0), ("1100", 2.0)],
        1.0 / (2.0 * 3f64.sqrt()),
    )
}

pub fn six_qubit_targets() -> Vec<QuantumState> {
    let r2 = 2f64.sqrt();
    let r6 = 6f64.sqrt();
    vec![
        ket(
            &[
                ("010101", 1.0), ("010110", -1.0), ("011001", -1.0), ("011010", 1.0),
                ("100101", -1.0), ("100110", 1.0), ("101001", 1.0), ("101010", -1.0),
            ],
            1.0 / (2.0 * r2),
        ),
        ket(
            &[
                ("010011", 2.0), ("010101", -1.0), ("010110", -1.0), ("011001", -1.0),
                ("011010", -1.0), ("011100", 2.0), ("100011", -2.0), ("100101", 1.0),
                ("100110", 1.0), ("101001", 1.0), ("101010", 1.0), ("101100", -2.0),
            ],
            1.0 / (2.0 * r6),
        ),
        ket(
            &[
                ("001101", 2.0), ("001110", -2.0), ("010101", -1.0), ("010110", 1.0),
                ("011001", -1.0), ("011010", 1.0), ("100101", -1.0), ("100110", 1.0),
                ("101001", -1.0), ("101010", 1.0), ("110001", 2.0), ("110010", -2.0),
            ],
            1.0 / (2.0 * r6),
        ),
        ket(
            &[
                ("001011", 4.0), ("001101", -2.0), ("001110", -2.0), ("010011", -2.0),
                ("010101", 1.0), ("010110", 1.0), ("011001", -1.0), ("011010", -1.0),
                ("011100", 2.0), ("100011", -2.0), ("100101", 1.0), ("100110", 1.0),
                ("101001", -1.0), ("101010", -1.0), ("101100", 2.0), ("110001", 2.0),
                ("110010", 2.0), ("110100", -4.0),
            ],
            1.0 / (6.0 * r2),
        ),
        ket(
            &[
                ("000111", 3.0), ("001011", -1.0), ("001101", -1.0), ("001110", -1.0),
                ("010011", -1.0), ("010101", -1.0), ("010110", -1.0), ("011001", 1.0),
                ("011010", 1.0), ("011100", 1.0), ("100011", -1.0), ("100101", -1.0),
                ("100110", -1.0), ("101001", 1.0), ("101010", 1.0), ("101100", 1.0),
                ("110001", 1.0), ("110010", 1.0), ("110100", 1.0), ("111000", -3.0),
            ],
            1.0 / 6.0,
        ),
    ]
}

/// Largest amplitude difference after phase normalization of both states.
pub fn amplitude_distance(a: &QuantumState, b: &QuantumState) -> f64 {
    let (a, b) = (a.phase_normalized(), b.phase_normalized());
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn random_amplitudes(n_qubits: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..1usize << n_qubits)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

pub fn random_state(n_qubits: usize, seed: u64) -> QuantumState {
    QuantumState::normalized(random_amplitudes(n_qubits, seed)).unwrap()
}

pub fn dyck(pairs: usize, index: usize) -> ParenSequence {
    let all = enumerate_parens(pairs);
    all[index % all.len()].clone()
}

/// Random superposition of the pairing basis for `pairs` singlets.
pub fn random_dfs_state(pairs: usize, seed: u64) -> QuantumState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 2 * pairs;
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    for seq in enumerate_parens(pairs) {
        let col = pairing_to_state(&parens_to_pairing(&seq).unwrap()).unwrap();
        let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        for (x, y) in amps.iter_mut().zip(col.amplitudes()) {
            *x += c * y;
        }
    }
    QuantumState::normalized(amps).unwrap()
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol
}

pub fn check_projector_idempotence(pairs: usize, index: usize, seed: u64) -> Result<(), TestCaseError> {
    let a = pairing_to_state(&parens_to_pairing(&dyck(pairs, index)).unwrap()).unwrap();
    let v = RawVector::new(random_amplitudes(2 * pairs, seed)).unwrap();
    let once = rank1_deflate(&v, &a).unwrap();
    let twice = rank1_deflate(&once, &a).unwrap();
    let diff = once
        .amplitudes()
        .iter()
        .zip(twice.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    prop_assert!(diff < 1e-12, "P(Pv) differs from Pv by {diff}");
    prop_assert!(once.norm() <= v.norm() + 1e-12);
    Ok(())
}

pub fn check_deflation_orthogonality(n_qubits: usize, seed: u64, prior_count: usize) -> Result<(), TestCaseError> {
    let a = random_state(n_qubits, seed);
    let v = RawVector::new(random_amplitudes(n_qubits, seed ^ 0x5555)).unwrap();
    let out = rank1_deflate(&v, &a).unwrap();
    let overlap: C64 = a
        .amplitudes()
        .iter()
        .zip(out.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum();
    prop_assert!(overlap.norm() < 1e-12 * v.norm().max(1.0), "overlap {overlap}");

    let priors: Vec<QuantumState> = (0..prior_count)
        .map(|i| random_state(n_qubits, seed.wrapping_add(17 * (i as u64 + 1))))
        .collect();
    let input = random_state(n_qubits, seed ^ 0xAAAA);
    let (chained, p) = project_chain(&input, &priors).unwrap();
    let last = priors.last().unwrap();
    let tail: C64 = last
        .amplitudes()
        .iter()
        .zip(chained.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum();
    prop_assert!(tail.norm() < 1e-12, "chain output overlaps its last prior by {tail}");
    prop_assert!((0.0..=1.0 + 1e-12).contains(&p));
    Ok(())
}

pub fn check_measurement_completeness(n_qubits: usize, seed: u64, mask: u32) -> Result<(), TestCaseError> {
    let psi = random_state(n_qubits, seed);
    let mut targets: Vec<usize> = (0..n_qubits).filter(|q| mask >> q & 1 == 1).collect();
    if targets.is_empty() {
        targets.push((seed as usize) % n_qubits);
    }
    if seed & 1 == 1 {
        targets.reverse();
    }
    let probs = outcome_probabilities(&psi, &targets).unwrap();
    let total: f64 = probs.iter().sum();
    prop_assert!(close(total, 1.0, 1e-12), "probabilities sum to {total}");
    prop_assert!(probs.iter().all(|&p| p >= 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = measure_qubits(&psi, &targets, &mut rng).unwrap();
    let index = m.bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
    prop_assert!(close(m.probability, probs[index], 1e-15));
    let norm = inner_product(&m.collapsed, &m.collapsed).unwrap().re;
    prop_assert!(close(norm, 1.0, 1e-12));
    let after = outcome_probabilities(&m.collapsed, &targets).unwrap();
    prop_assert!(close(after[index], 1.0, 1e-12), "collapse left {} on the record", after[index]);
    Ok(())
}

pub fn check_parens_round_trip(pairs: usize, index: usize) -> Result<(), TestCaseError> {
    let seq = dyck(pairs, index);
    let pairing = parens_to_pairing(&seq).unwrap();
    prop_assert_eq!(pairing.n_qubits(), 2 * pairs);
    let mut labels: Vec<usize> = pairing.pairs().iter().flat_map(|&(a, b)| [a, b]).collect();
    labels.sort_unstable();
    prop_assert_eq!(labels, (1..=2 * pairs).collect::<Vec<_>>());
    prop_assert_eq!(pairing_to_parens(&pairing).unwrap(), seq);
    Ok(())
}

/// The round circuit's all-zeros branch equals the exact projector chain,
/// and a sampled all-zeros outcome leaves the system in that state.
pub fn check_sampled_exact_consistency(pairs: usize, k: usize, seed: u64) -> Result<(), TestCaseError> {
    let all = enumerate_parens(pairs);
    let k = 1 + k % (all.len() - 1);
    let pairings: Vec<_> = all[..k].iter().map(|s| parens_to_pairing(s).unwrap()).collect();
    let priors: Vec<QuantumState> = pairings.iter().map(|p| pairing_to_state(p).unwrap()).collect();
    let input = random_dfs_state(pairs, seed);
    let (exact, p_exact) = project_chain(&input, &priors).unwrap();

    let round = orthogonalization_round_circuit(&pairings).unwrap();
    let joint = pre_measurement_state(&round, &input).unwrap();
    let branch = zero_branch(&joint, round.n_system).unwrap();
    let diff = exact
        .amplitudes()
        .iter()
        .zip(branch.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    prop_assert!(diff < 1e-10, "zero branch differs from the chain by {diff}");
    prop_assert!(close(branch.norm().powi(2), p_exact, 1e-10));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = simulate(&round, &input, &mut rng).unwrap();
    if outcome.all_zero() && p_exact > 1e-12 {
        let sys = outcome.system_state().unwrap();
        let d = amplitude_distance(&sys, &exact.normalize().unwrap());
        prop_assert!(d < 1e-9, "sampled state off by {d}");
    }
    Ok(())
}

pub fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    })
}

/// Runs every property suite at `PROPERTY_CASES` cases; returns the names
/// of failing suites.
pub fn run_property_suites() -> Vec<(String, String)> {
    let mut failures = Vec::new();
    let mut record = |name: &str, r: Result<(), String>| {
        if let Err(e) = r {
            failures.push((name.to_string(), e));
        }
    };
    record(
        "projector idempotence",
        runner()
            .run(&(1usize..=3, any::<usize>(), any::<u64>()), |(p, i, s)| {
                check_projector_idempotence(p, i, s)
            })
            .map_err(|e| e.to_string()),
    );
    record(
        "deflation orthogonality",
        runner()
            .run(&(1usize..=6, any::<u64>(), 1usize..=4), |(n, s, k)| {
                check_deflation_orthogonality(n, s, k)
            })
            .map_err(|e| e.to_string()),
    );
    record(
        "measurement completeness",
        runner()
            .run(&(1usize..=6, any::<u64>(), any::<u32>()), |(n, s, m)| {
                check_measurement_completeness(n, s, m)
            })
            .map_err(|e| e.to_string()),
    );
    record(
        "parens/pairing round trip",
        runner()
            .run(&(1usize..=7, any::<usize>()), |(p, i)| check_parens_round_trip(p, i))
            .map_err(|e| e.to_string()),
    );
    record(
        "sampled/exact consistency",
        runner()
            .run(&(2usize..=3, any::<usize>(), any::<u64>()), |(p, k, s)| {
                check_sampled_exact_consistency(p, k, s)
            })
            .map_err(|e| e.to_string()),
    );
    failures
}
