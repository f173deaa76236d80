//! Dense complex statevectors.
//!
//! Qubit `0` is the most significant bit of an amplitude index, so the ket
//! `|i_0 i_1 … i_{n-1}⟩` lives at index `Σ i_q · 2^(n-1-q)`. Serialized
//! amplitude arrays use the same order.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gates::GateMatrix;

pub type C64 = Complex64;

/// Tolerance on `Σ|amp|² = 1` accepted when wrapping external amplitudes.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Outcomes whose Born probability falls below this are never sampled.
pub const ZERO_PROBABILITY_GUARD: f64 = 1e-15;

/// Largest register the dense simulator will allocate.
pub const MAX_QUBITS: usize = 24;

/// Bit mask selecting `qubit` inside an index over `n_qubits`.
#[inline]
pub(crate) fn qubit_mask(n_qubits: usize, qubit: usize) -> usize {
    1usize << (n_qubits - 1 - qubit)
}

pub(crate) fn check_targets(n_qubits: usize, targets: &[usize]) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= n_qubits {
            return Err(Error::arg(format!(
                "qubit {t} out of range for a {n_qubits}-qubit register"
            )));
        }
        if targets[..i].contains(&t) {
            return Err(Error::arg(format!("qubit {t} listed twice")));
        }
    }
    Ok(())
}

fn norm_of(amplitudes: &[C64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::arg(format!(
            "amplitude count {len} is not a power of two >= 2"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

/// A normalized pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl QuantumState {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// Computational basis state with the given index.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::arg(format!("unsupported qubit count {n_qubits}")));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::arg(format!("basis index {index} >= {dim}")));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Wraps amplitudes that are already normalized (within [`NORM_TOLERANCE`]).
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let norm = norm_of(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::arg(format!("state norm {norm} is not 1")));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        RawVector::new(amplitudes)?.normalize()
    }

    pub(crate) fn from_raw_parts(n_qubits: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn to_raw(&self) -> RawVector {
        RawVector {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.clone(),
            norm: 1.0,
        }
    }

    /// Tensor product `self ⊗ other`; `self` occupies the leading qubits.
    pub fn tensor(&self, other: &QuantumState) -> Result<QuantumState> {
        let n = self.n_qubits + other.n_qubits;
        if n > MAX_QUBITS {
            return Err(Error::Resource(format!("{n} qubits exceeds {MAX_QUBITS}")));
        }
        let mut amplitudes = Vec::with_capacity(1 << n);
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Ok(QuantumState {
            n_qubits: n,
            amplitudes,
        })
    }

    /// Same ray with the largest-magnitude amplitude made real and positive.
    ///
    /// Ties (magnitudes within a relative 1e-9) resolve to the lowest index.
    pub fn phase_normalized(&self) -> QuantumState {
        let max = self
            .amplitudes
            .iter()
            .map(|a| a.norm())
            .fold(0.0f64, f64::max);
        let pivot = self
            .amplitudes
            .iter()
            .find(|a| a.norm() >= max * (1.0 - 1e-9))
            .copied()
            .unwrap_or(C64::new(1.0, 0.0));
        let phase = pivot.conj() / pivot.norm();
        QuantumState {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a * phase).collect(),
        }
    }

    /// Probability of each computational basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

impl fmt::Display for QuantumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm() < 1e-12 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(
                f,
                "({:+.6}{:+.6}i)|{:0width$b}⟩",
                a.re,
                a.im,
                i,
                width = self.n_qubits
            )?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for QuantumState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        amplitude_pairs::serialize(&self.amplitudes, serializer)
    }
}

impl<'de> Deserialize<'de> for QuantumState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let amplitudes = amplitude_pairs::deserialize(deserializer)?;
        QuantumState::from_amplitudes(amplitudes).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing complex vectors as `[[re, im], …]`.
pub mod amplitude_pairs {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(amps: &[C64], serializer: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = amps.iter().map(|a| [a.re, a.im]).collect();
        pairs.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<C64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        Ok(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

/// An unnormalized vector, typically the output of a projector chain.
///
/// Kept distinct from [`QuantumState`] so that projections never renormalize
/// silently.
#[derive(Clone, Debug, PartialEq)]
pub struct RawVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
    norm: f64,
}

impl RawVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let norm = norm_of(&amplitudes);
        Ok(Self {
            n_qubits,
            amplitudes,
            norm,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Cached Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn is_zero(&self) -> bool {
        self.norm < ZERO_PROBABILITY_GUARD.sqrt()
    }

    /// Unit vector along `self`; fails on (numerically) zero vectors.
    pub fn normalize(&self) -> Result<QuantumState> {
        if self.norm <= f64::MIN_POSITIVE || self.norm * self.norm < ZERO_PROBABILITY_GUARD {
            return Err(Error::arg("cannot normalize a zero vector"));
        }
        let inv = 1.0 / self.norm;
        Ok(QuantumState {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a * inv).collect(),
        })
    }
}

/// `⟨u|v⟩`.
pub fn inner_product(u: &QuantumState, v: &QuantumState) -> Result<C64> {
    if u.n_qubits != v.n_qubits {
        return Err(Error::arg(format!(
            "dimension mismatch: {} vs {} qubits",
            u.n_qubits, v.n_qubits
        )));
    }
    Ok(dot(&u.amplitudes, &v.amplitudes))
}

/// `|⟨u|v⟩|²`, clamped into `[0, 1]`.
pub fn fidelity(u: &QuantumState, v: &QuantumState) -> Result<f64> {
    Ok(inner_product(u, v)?.norm_sqr().min(1.0))
}

/// `1 - fidelity(u, v)`.
pub fn infidelity(u: &QuantumState, v: &QuantumState) -> Result<f64> {
    Ok((1.0 - fidelity(u, v)?).max(0.0))
}

#[inline]
pub(crate) fn dot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// `v - a⟨a|v⟩`: removes the component of `v` along the unit vector `a`.
pub fn rank1_deflate(v: &RawVector, a: &QuantumState) -> Result<RawVector> {
    if v.n_qubits != a.n_qubits {
        return Err(Error::arg(format!(
            "dimension mismatch: {} vs {} qubits",
            v.n_qubits, a.n_qubits
        )));
    }
    let mut amplitudes = v.amplitudes.clone();
    deflate_in_place(&mut amplitudes, &a.amplitudes);
    RawVector::new(amplitudes)
}

#[inline]
pub(crate) fn deflate_in_place(v: &mut [C64], a: &[C64]) {
    let overlap = dot(a, v);
    for (x, y) in v.iter_mut().zip(a) {
        *x -= y * overlap;
    }
}

/// `U|ψ⟩` with `gate` acting on `targets` (first target = most significant
/// local bit) and identity elsewhere.
pub fn apply_gate(state: &QuantumState, gate: &GateMatrix, targets: &[usize]) -> Result<QuantumState> {
    let mut amplitudes = state.amplitudes.clone();
    apply_in_place(&mut amplitudes, state.n_qubits, gate, targets)?;
    Ok(QuantumState {
        n_qubits: state.n_qubits,
        amplitudes,
    })
}

/// In-place gate application on a raw amplitude buffer.
pub fn apply_in_place(
    amps: &mut [C64],
    n_qubits: usize,
    gate: &GateMatrix,
    targets: &[usize],
) -> Result<()> {
    if amps.len() != 1 << n_qubits {
        return Err(Error::arg("amplitude buffer does not match qubit count"));
    }
    if gate.arity() != targets.len() {
        return Err(Error::arg(format!(
            "gate acts on {} qubits but {} targets were given",
            gate.arity(),
            targets.len()
        )));
    }
    check_targets(n_qubits, targets)?;
    let masks: Vec<usize> = targets.iter().map(|&t| qubit_mask(n_qubits, t)).collect();
    let all: usize = masks.iter().sum();
    match gate {
        GateMatrix::PhaseFlip { .. } => {
            for (i, a) in amps.iter_mut().enumerate() {
                if i & all == all {
                    *a = -*a;
                }
            }
        }
        GateMatrix::Dense { matrix, .. } if targets.len() == 1 => {
            apply_one(amps, masks[0], [matrix[0], matrix[1], matrix[2], matrix[3]]);
        }
        GateMatrix::Dense { matrix, .. } if targets.len() == 2 => {
            apply_two(amps, masks[0], masks[1], matrix);
        }
        GateMatrix::Dense { matrix, .. } => {
            let k = targets.len();
            let size = 1usize << k;
            let offsets: Vec<usize> = (0..size)
                .map(|j| {
                    (0..k)
                        .filter(|r| j & (1 << (k - 1 - r)) != 0)
                        .map(|r| masks[r])
                        .sum()
                })
                .collect();
            let mut buf = vec![C64::new(0.0, 0.0); size];
            for base in 0..amps.len() {
                if base & all != 0 {
                    continue;
                }
                for (slot, off) in buf.iter_mut().zip(&offsets) {
                    *slot = amps[base + off];
                }
                for (row, off) in offsets.iter().enumerate() {
                    let coeffs = &matrix[row * size..(row + 1) * size];
                    amps[base + off] = coeffs.iter().zip(&buf).map(|(m, x)| m * x).sum();
                }
            }
        }
    }
    Ok(())
}

fn apply_one(amps: &mut [C64], mask: usize, m: [C64; 4]) {
    let zero = C64::new(0.0, 0.0);
    if m[1] == zero && m[2] == zero {
        for (i, a) in amps.iter_mut().enumerate() {
            *a *= if i & mask == 0 { m[0] } else { m[3] };
        }
        return;
    }
    for block in amps.chunks_exact_mut(2 * mask) {
        let (lo, hi) = block.split_at_mut(mask);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = m[0] * x + m[1] * y;
            *b = m[2] * x + m[3] * y;
        }
    }
}

/// `first` is the more significant local bit of the 4×4 row-major `m`.
fn apply_two(amps: &mut [C64], first: usize, second: usize, m: &[C64]) {
    let (lo, hi) = (first.min(second), first.max(second));
    let offsets = [0, second, first, first + second];
    for idx in 0..amps.len() / 4 {
        let base = ((idx & !(lo - 1)) << 1) | (idx & (lo - 1));
        let base = ((base & !(hi - 1)) << 1) | (base & (hi - 1));
        let x = offsets.map(|o| amps[base + o]);
        for (row, o) in offsets.iter().enumerate() {
            let r = &m[4 * row..4 * row + 4];
            amps[base + o] = r[0] * x[0] + r[1] * x[1] + r[2] * x[2] + r[3] * x[3];
        }
    }
}

/// Result of a projective measurement.
#[derive(Clone, Debug)]
pub struct Measurement {
    pub bits: Vec<u8>,
    pub collapsed: QuantumState,
    pub probability: f64,
}

/// Born distribution of the joint outcome on `targets`; outcome `j` reads
/// `targets[0]` as its most significant bit.
pub fn outcome_probabilities(state: &QuantumState, targets: &[usize]) -> Result<Vec<f64>> {
    check_targets(state.n_qubits, targets)?;
    let n = state.n_qubits;
    let mut probs = vec![0.0; 1 << targets.len()];
    for (i, a) in state.amplitudes.iter().enumerate() {
        probs[outcome_index(i, n, targets)] += a.norm_sqr();
    }
    Ok(probs)
}

#[inline]
fn outcome_index(i: usize, n: usize, targets: &[usize]) -> usize {
    targets
        .iter()
        .fold(0, |acc, &t| (acc << 1) | usize::from(i & qubit_mask(n, t) != 0))
}

/// Samples the joint outcome on `targets` and collapses the state.
pub fn measure_qubits<R: Rng + ?Sized>(
    state: &QuantumState,
    targets: &[usize],
    rng: &mut R,
) -> Result<Measurement> {
    let probs = outcome_probabilities(state, targets)?;
    let allowed: f64 = probs.iter().filter(|&&p| p >= ZERO_PROBABILITY_GUARD).sum();
    if allowed <= 0.0 {
        return Err(Error::arg("state has no outcome above the probability guard"));
    }
    let u: f64 = rng.random::<f64>() * allowed;
    let mut acc = 0.0;
    let mut outcome = None;
    let mut last_allowed = 0;
    for (j, &p) in probs.iter().enumerate() {
        if p < ZERO_PROBABILITY_GUARD {
            continue;
        }
        last_allowed = j;
        acc += p;
        if u < acc {
            outcome = Some(j);
            break;
        }
    }
    let outcome = outcome.unwrap_or(last_allowed);
    let probability = probs[outcome];
    let n = state.n_qubits;
    let scale = 1.0 / probability.sqrt();
    let amplitudes = state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if outcome_index(i, n, targets) == outcome {
                a * scale
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    let k = targets.len();
    let bits = (0..k).map(|r| ((outcome >> (k - 1 - r)) & 1) as u8).collect();
    Ok(Measurement {
        bits,
        collapsed: QuantumState {
            n_qubits: n,
            amplitudes,
        },
        probability,
    })
}
