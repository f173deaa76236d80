//! Pairing states, their Dyck-word index set, and the total-spin check.
//!
//! Pairings use 1-based qubit labels; circuits and amplitude indices are
//! 0-based, so label `q` is qubit `q - 1`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{QuantumState, C64};

/// Largest `N` for which basis vectors are materialized.
pub const MAX_BASIS_QUBITS: usize = 12;

/// Largest `N` for which the dense `S²` matrix is built.
pub const MAX_S2_QUBITS: usize = 10;

fn check_even(n: usize) -> Result<()> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::arg(format!("N must be even and >= 2, got {n}")));
    }
    Ok(())
}

/// Catalan number `N! / ((N/2)! (N/2+1)!)`.
pub fn dfs_dimension(n: usize) -> Result<u64> {
    check_even(n)?;
    let half = (n / 2) as u128;
    // C_{h+1} = C_h * 2(2h+1) / (h+2)
    let mut cat: u128 = 1;
    for h in 0..half {
        cat = cat
            .checked_mul(2 * (2 * h + 1))
            .ok_or_else(|| Error::arg(format!("d({n}) overflows")))?
            / (h + 2);
    }
    u64::try_from(cat).map_err(|_| Error::arg(format!("d({n}) overflows")))
}

/// `(N-1)!!`, the number of perfect matchings of `N` qubits.
pub fn pairing_count(n: usize) -> Result<u64> {
    check_even(n)?;
    (1..n as u64)
        .step_by(2)
        .try_fold(1u64, |acc, k| acc.checked_mul(k))
        .ok_or_else(|| Error::arg(format!("f({n}) overflows")))
}

/// A balanced parentheses string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ParenSequence(String);

impl ParenSequence {
    pub fn new(chars: impl Into<String>) -> Result<Self> {
        let chars = chars.into();
        let mut depth = 0i64;
        for ch in chars.chars() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                other => return Err(Error::arg(format!("unexpected character {other:?}"))),
            }
            if depth < 0 {
                return Err(Error::arg(format!("unbalanced sequence {chars:?}")));
            }
        }
        if depth != 0 || chars.is_empty() {
            return Err(Error::arg(format!("unbalanced sequence {chars:?}")));
        }
        Ok(Self(chars))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ParenSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for ParenSequence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::new(s)
    }
}

impl TryFrom<String> for ParenSequence {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Self::new(s)
    }
}

impl From<ParenSequence> for String {
    fn from(p: ParenSequence) -> String {
        p.0
    }
}

/// All balanced sequences with `pairs` pairs, ordered by the decomposition
/// `S = (A)B` with `|A|` ascending and sub-lists in their own order.
pub fn enumerate_parens(pairs: usize) -> Vec<ParenSequence> {
    let mut table: Vec<Vec<String>> = vec![vec![String::new()]];
    for n in 1..=pairs {
        let mut level = Vec::new();
        for a in 0..n {
            for inner in &table[a] {
                for rest in &table[n - 1 - a] {
                    level.push(format!("({inner}){rest}"));
                }
            }
        }
        table.push(level);
    }
    if pairs == 0 {
        return Vec::new();
    }
    table
        .pop()
        .unwrap_or_default()
        .into_iter()
        .map(ParenSequence)
        .collect()
}

/// A perfect matching of qubit labels `1..=N` into singlet pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, usize)>", into = "Vec<(usize, usize)>")]
pub struct Pairing {
    pairs: Vec<(usize, usize)>,
}

impl Pairing {
    /// Validates and canonicalizes (each pair ascending, pairs sorted).
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let n = 2 * pairs.len();
        if n == 0 {
            return Err(Error::arg("empty pairing"));
        }
        let mut seen = vec![false; n + 1];
        let mut canon = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            for q in [a, b] {
                if q == 0 || q > n {
                    return Err(Error::arg(format!("label {q} outside 1..={n}")));
                }
                if seen[q] {
                    return Err(Error::arg(format!("label {q} used twice")));
                }
                seen[q] = true;
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        Ok(Self { pairs: canon })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.pairs.len()
    }

    /// Pairs as 0-based qubit indices.
    pub fn qubit_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().map(|&(a, b)| (a - 1, b - 1))
    }
}

impl TryFrom<Vec<(usize, usize)>> for Pairing {
    type Error = Error;
    fn try_from(pairs: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(pairs)
    }
}

impl From<Pairing> for Vec<(usize, usize)> {
    fn from(p: Pairing) -> Self {
        p.pairs
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "}}")
    }
}

/// Opening positions fill the odd slots and closing positions the even
/// slots, each ascending; slot pairs `(2m-1, 2m)` become singlets.
pub fn parens_to_pairing(seq: &ParenSequence) -> Result<Pairing> {
    let opens = seq.0.char_indices().filter(|&(_, c)| c == '(').map(|(i, _)| i + 1);
    let closes = seq.0.char_indices().filter(|&(_, c)| c == ')').map(|(i, _)| i + 1);
    Pairing::new(opens.zip(closes).collect())
}

/// Inverse of `parens_to_pairing`; fails for pairings outside its image.
pub fn pairing_to_parens(pairing: &Pairing) -> Result<ParenSequence> {
    let n = pairing.n_qubits();
    let mut chars = vec![')'; n];
    for &(a, _) in pairing.pairs() {
        chars[a - 1] = '(';
    }
    let seq = ParenSequence::new(chars.into_iter().collect::<String>())
        .map_err(|_| Error::arg(format!("{pairing} does not come from a balanced sequence")))?;
    if parens_to_pairing(&seq)? != *pairing {
        return Err(Error::arg(format!("{pairing} does not come from a balanced sequence")));
    }
    Ok(seq)
}

/// Tensor product of singlets `(|01⟩ - |10⟩)/√2` over each pair.
pub fn pairing_to_state(pairing: &Pairing) -> Result<QuantumState> {
    let n = pairing.n_qubits();
    if n > crate::statevector::MAX_QUBITS {
        return Err(Error::Resource(format!("{n} qubits is too many to materialize")));
    }
    let half = pairing.pairs.len();
    let mag = 0.5f64.powf(half as f64 / 2.0);
    let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n];
    for choice in 0..1usize << half {
        let mut index = 0usize;
        let mut sign = 1.0;
        for (m, (a, b)) in pairing.qubit_pairs().enumerate() {
            // choice bit 0 -> |0⟩_a|1⟩_b (+), bit 1 -> |1⟩_a|0⟩_b (-)
            let one = if choice >> m & 1 == 0 { b } else { a };
            if choice >> m & 1 == 1 {
                sign = -sign;
            }
            index |= 1 << (n - 1 - one);
        }
        amplitudes[index] = C64::new(sign * mag, 0.0);
    }
    Ok(QuantumState::from_raw_parts(n, amplitudes))
}

/// Extreme singular values of a basis matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralInfo {
    pub sigma_max: f64,
    pub sigma_min: f64,
    pub kappa: f64,
}

/// The non-orthogonal pairing basis `a_1 … a_d` in enumeration order.
#[derive(Clone, Debug)]
pub struct BasisMatrix {
    n_qubits: usize,
    parens: Vec<ParenSequence>,
    pairings: Vec<Pairing>,
    columns: Vec<QuantumState>,
}

impl BasisMatrix {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[QuantumState] {
        &self.columns
    }

    /// Column `a_i`, 1-based.
    pub fn column(&self, i: usize) -> &QuantumState {
        &self.columns[i - 1]
    }

    pub fn parens(&self) -> &[ParenSequence] {
        &self.parens
    }

    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    /// `A†A`.
    pub fn gram(&self) -> DMatrix<C64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| {
            crate::statevector::dot(self.columns[i].amplitudes(), self.columns[j].amplitudes())
        })
    }

    /// Dense `2^N × d` matrix with the basis vectors as columns.
    pub fn to_dense(&self) -> DMatrix<C64> {
        let rows = 1usize << self.n_qubits;
        DMatrix::from_fn(rows, self.dim(), |r, col| self.columns[col].amplitude(r))
    }

    /// Numerical rank from the Gram eigenvalues (relative cutoff 1e-10).
    pub fn rank(&self) -> usize {
        let eig = SymmetricEigen::new(self.gram()).eigenvalues;
        let max = eig.iter().cloned().fold(0.0, f64::max);
        eig.iter().filter(|&&e| e > max * 1e-10).count()
    }

    /// Singular values from the Gram eigenvalues.
    pub fn spectral_info(&self) -> Result<SpectralInfo> {
        let eig = SymmetricEigen::new(self.gram()).eigenvalues;
        let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        if min <= max * 1e-20 {
            return Err(Error::Degeneracy {
                column: self.dim(),
                pivot_norm: min.max(0.0).sqrt(),
            });
        }
        let (sigma_max, sigma_min) = (max.sqrt(), min.sqrt());
        Ok(SpectralInfo {
            sigma_max,
            sigma_min,
            kappa: sigma_max / sigma_min,
        })
    }
}

/// Enumerates, maps and materializes the basis for `N` qubits.
pub fn build_basis_matrix(n: usize) -> Result<(BasisMatrix, SpectralInfo)> {
    check_even(n)?;
    if n > MAX_BASIS_QUBITS {
        return Err(Error::Resource(format!(
            "basis materialization is capped at N = {MAX_BASIS_QUBITS}"
        )));
    }
    let parens = enumerate_parens(n / 2);
    let pairings = parens
        .iter()
        .map(parens_to_pairing)
        .collect::<Result<Vec<_>>>()?;
    let columns = pairings
        .iter()
        .map(pairing_to_state)
        .collect::<Result<Vec<_>>>()?;
    let basis = BasisMatrix {
        n_qubits: n,
        parens,
        pairings,
        columns,
    };
    if basis.rank() != basis.dim() {
        return Err(Error::Degeneracy {
            column: basis.rank(),
            pivot_norm: 0.0,
        });
    }
    let spectral = basis.spectral_info()?;
    Ok((basis, spectral))
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
    Z,
}

/// `S_α ψ` with `S_α = Σ_i σ_α^{(i)}`.
fn apply_total_spin(n: usize, axis: Axis, psi: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); psi.len()];
    let i_unit = C64::new(0.0, 1.0);
    for q in 0..n {
        let mask = 1usize << (n - 1 - q);
        for (idx, &amp) in psi.iter().enumerate() {
            let bit = idx & mask != 0;
            match axis {
                Axis::X => out[idx ^ mask] += amp,
                // Y|0⟩ = i|1⟩, Y|1⟩ = -i|0⟩
                Axis::Y => out[idx ^ mask] += if bit { -i_unit } else { i_unit } * amp,
                Axis::Z => out[idx] += if bit { -amp } else { amp },
            }
        }
    }
    out
}

/// `(S_x² + S_y² + S_z²)|ψ⟩` with bare Pauli operators.
pub fn total_spin_squared(state: &QuantumState) -> Vec<C64> {
    let n = state.n_qubits();
    let mut acc = vec![C64::new(0.0, 0.0); state.dim()];
    for axis in [Axis::X, Axis::Y, Axis::Z] {
        let once = apply_total_spin(n, axis, state.amplitudes());
        let twice = apply_total_spin(n, axis, &once);
        for (a, t) in acc.iter_mut().zip(twice) {
            *a += t;
        }
    }
    acc
}

/// `‖S²|ψ⟩‖`; zero exactly on the decoherence-free subspace.
pub fn verify_dfs_membership(state: &QuantumState) -> f64 {
    total_spin_squared(state)
        .iter()
        .map(|a| a.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Dense `S²` on `n` qubits (real symmetric in the computational basis).
pub fn total_spin_squared_matrix(n: usize) -> Result<DMatrix<f64>> {
    if n == 0 || n > MAX_S2_QUBITS {
        return Err(Error::Resource(format!(
            "dense S² is capped at {MAX_S2_QUBITS} qubits"
        )));
    }
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let e = QuantumState::basis(n, col)?;
        for (row, v) in total_spin_squared(&e).into_iter().enumerate() {
            m[(row, col)] = v.re;
        }
    }
    Ok(m)
}

/// Number of `S²` eigenvalues below 1e-8.
pub fn s2_null_space_dimension(n: usize) -> Result<usize> {
    let eig = SymmetricEigen::new(total_spin_squared_matrix(n)?).eigenvalues;
    Ok(eig.iter().filter(|e| e.abs() < 1e-8).count())
}
