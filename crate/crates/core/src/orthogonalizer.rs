//! Iterated postselected projection `Q_k = P_k ⋯ P_1` and its analytics.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{build_basis_matrix, BasisMatrix, SpectralInfo};
use crate::circuit::{
    orthogonalization_round_circuit_with, pre_measurement_state, sample_measurements, zero_branch,
    Circuit, ControlStrategy,
};
use crate::error::{Error, Result};
use crate::statevector::{
    deflate_in_place, dot, infidelity, QuantumState, RawVector, C64, ZERO_PROBABILITY_GUARD,
};

/// Spectral radii below this are treated as exactly zero.
pub const LAMBDA_ZERO: f64 = 1e-12;

/// Gram–Schmidt pivots below this signal a rank-deficient basis.
pub const PIVOT_TOLERANCE: f64 = 1e-10;

/// Hard ceiling on circuit executions in one sampled trial.
pub const MAX_RUNS_PER_TRIAL: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Follow the all-zeros branch with exact operator algebra.
    #[default]
    Exact,
    /// Simulate the round circuit and sample ancilla outcomes.
    Sampled,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "sampled" => Ok(Mode::Sampled),
            other => Err(Error::arg(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Sampled => "sampled",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StoppingRule {
    /// Stop once the infidelity against the classical target drops below ε.
    #[default]
    Oracle,
    /// Stop after the a-priori iteration count from the spectral gap.
    Bound,
}

impl FromStr for StoppingRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(StoppingRule::Oracle),
            "bound" => Ok(StoppingRule::Bound),
            other => Err(Error::arg(format!("unknown stopping rule {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreparationConfig {
    pub n_qubits: usize,
    pub epsilon: f64,
    pub mode: Mode,
    pub stopping: StoppingRule,
    pub max_m: usize,
    pub trials: usize,
    pub seed: u64,
    pub strategy: ControlStrategy,
}

impl PreparationConfig {
    pub fn new(n_qubits: usize, epsilon: f64) -> Self {
        PreparationConfig {
            n_qubits,
            epsilon,
            mode: Mode::Exact,
            stopping: StoppingRule::Oracle,
            max_m: 200,
            trials: 1,
            seed: 0,
            strategy: ControlStrategy::Conjugated,
        }
    }

    pub fn sampled(mut self, trials: usize, seed: u64) -> Self {
        self.mode = Mode::Sampled;
        self.trials = trials;
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::arg(format!("epsilon {} not in (0, 1)", self.epsilon)));
        }
        if self.max_m == 0 {
            return Err(Error::arg("max_m must be >= 1"));
        }
        if self.mode == Mode::Sampled && self.trials == 0 {
            return Err(Error::arg("sampled mode needs at least one trial"));
        }
        if self.n_qubits < 2 || self.n_qubits % 2 != 0 {
            return Err(Error::arg(format!("N must be even and >= 2, got {}", self.n_qubits)));
        }
        Ok(())
    }
}

/// One stage `j` of the cascade for a single basis state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub m: usize,
    /// Against the classical target, `NaN` when no target was supplied.
    pub infidelity: f64,
    /// All-zeros probability of the round producing this stage.
    pub success_probability: f64,
    /// Model mean number of runs to reach this stage.
    pub expected_runs: f64,
    /// Cumulative runs in the first sampled trial when this stage was
    /// reached; one per stage in exact mode.
    pub circuit_runs: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreparationTrace {
    /// 1-based basis index.
    pub k: usize,
    /// Iterations performed (0 for the first basis state).
    pub m: usize,
    pub records: Vec<IterationRecord>,
    /// Runs spent on the first trial (exact mode: `m`, or 1 when `m = 0`).
    pub total_runs: u64,
    /// Runs per sampled trial; empty in exact mode.
    pub trial_runs: Vec<u64>,
}

impl PreparationTrace {
    pub fn final_infidelity(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.infidelity)
    }

    pub fn mean_runs(&self) -> f64 {
        if self.trial_runs.is_empty() {
            return self.total_runs as f64;
        }
        self.trial_runs.iter().sum::<u64>() as f64 / self.trial_runs.len() as f64
    }

    /// Standard error of the mean over sampled trials.
    pub fn stderr_runs(&self) -> f64 {
        let n = self.trial_runs.len();
        if n < 2 {
            return 0.0;
        }
        let mean = self.mean_runs();
        let var = self
            .trial_runs
            .iter()
            .map(|&r| (r as f64 - mean).powi(2))
            .sum::<f64>()
            / (n - 1) as f64;
        (var / n as f64).sqrt()
    }
}

#[derive(Clone, Debug)]
pub struct PreparationResult {
    pub config: PreparationConfig,
    /// Phase-normalized `u_1 … u_d`.
    pub basis: Vec<QuantumState>,
    pub traces: Vec<PreparationTrace>,
    pub spectral: SpectralInfo,
    /// `λ_k` for `k = 0 … d-1` (entry 0 is the empty product, reported as 0).
    pub lambda: Vec<f64>,
}

/// Serialized form of a preparation result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    #[serde(rename = "N")]
    pub n: usize,
    pub epsilon: f64,
    pub mode: Mode,
    pub seed: u64,
    pub spectral: SpectralInfo,
    pub states: Vec<StateDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    pub k: usize,
    pub m: usize,
    pub total_runs: u64,
    pub infidelity: f64,
    pub lambda: f64,
    #[serde(with = "crate::statevector::amplitude_pairs")]
    pub amplitudes: Vec<C64>,
}

impl PreparationResult {
    pub fn document(&self) -> ResultDocument {
        ResultDocument {
            n: self.config.n_qubits,
            epsilon: self.config.epsilon,
            mode: self.config.mode,
            seed: self.config.seed,
            spectral: self.spectral,
            states: self
                .basis
                .iter()
                .zip(&self.traces)
                .zip(&self.lambda)
                .map(|((u, t), &lambda)| StateDocument {
                    k: t.k,
                    m: t.m,
                    total_runs: t.total_runs,
                    infidelity: t.final_infidelity(),
                    lambda,
                    amplitudes: u.amplitudes().to_vec(),
                })
                .collect(),
        }
    }
}

/// Orthonormal `t_1 … t_d` plus the pivots `‖(I - 𝒫_k) a_{k+1}‖`.
#[derive(Clone, Debug)]
pub struct OracleBasis {
    pub states: Vec<QuantumState>,
    pub pivots: Vec<f64>,
}

/// Modified Gram–Schmidt with one reorthogonalization pass.
pub fn gram_schmidt_with_pivots(columns: &[QuantumState]) -> Result<OracleBasis> {
    let mut states: Vec<QuantumState> = Vec::with_capacity(columns.len());
    let mut pivots = Vec::with_capacity(columns.len());
    for (col, a) in columns.iter().enumerate() {
        let mut v = a.amplitudes().to_vec();
        for _pass in 0..2 {
            for t in &states {
                deflate_in_place(&mut v, t.amplitudes());
            }
        }
        let raw = RawVector::new(v)?;
        if raw.norm() < PIVOT_TOLERANCE {
            return Err(Error::Degeneracy {
                column: col + 1,
                pivot_norm: raw.norm(),
            });
        }
        pivots.push(raw.norm());
        states.push(raw.normalize()?);
    }
    Ok(OracleBasis { states, pivots })
}

/// Classical targets `t_1 … t_d`.
pub fn gram_schmidt_oracle(basis: &BasisMatrix) -> Result<Vec<QuantumState>> {
    Ok(gram_schmidt_with_pivots(basis.columns())?.states)
}

/// `P_k ⋯ P_1 |input⟩` by sequential deflation, and its squared norm.
pub fn project_chain(input: &QuantumState, priors: &[QuantumState]) -> Result<(RawVector, f64)> {
    let mut v = input.amplitudes().to_vec();
    for a in priors {
        if a.n_qubits() != input.n_qubits() {
            return Err(Error::arg("prior and input dimensions differ"));
        }
        deflate_in_place(&mut v, a.amplitudes());
    }
    let raw = RawVector::new(v)?;
    let p = raw.norm() * raw.norm();
    Ok((raw, p))
}

/// Convergence rate of `Q_k` on the span of its priors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralGap {
    pub lambda: f64,
}

impl SpectralGap {
    /// `⌈ln(ε/κ) / ln λ⌉`, or 1 when `λ = 0`.
    pub fn m_bound(&self, epsilon: f64, kappa: f64) -> usize {
        if self.lambda < LAMBDA_ZERO {
            return 1;
        }
        let m = ((epsilon / kappa).ln() / self.lambda.ln()).ceil();
        if m.is_finite() && m >= 1.0 {
            m as usize
        } else {
            1
        }
    }
}

/// Largest eigenvalue magnitude of `Q_k` restricted to `span{a_1 … a_k}`.
pub fn spectral_gap(priors: &[QuantumState]) -> Result<SpectralGap> {
    if priors.is_empty() {
        return Err(Error::arg("spectral gap needs at least one prior"));
    }
    let frame = gram_schmidt_with_pivots(priors)?.states;
    let k = frame.len();
    let mut m = DMatrix::<C64>::zeros(k, k);
    for (j, tj) in frame.iter().enumerate() {
        let (qj, _) = project_chain(tj, priors)?;
        for (i, ti) in frame.iter().enumerate() {
            m[(i, j)] = dot(ti.amplitudes(), qj.amplitudes());
        }
    }
    let lambda = nalgebra::linalg::Schur::new(m)
        .eigenvalues()
        .ok_or_else(|| Error::arg("eigenvalue extraction failed"))?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    Ok(SpectralGap { lambda })
}

/// Mean runs per stage under restart-from-stage-1 semantics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunModel {
    pub runs: Vec<f64>,
    /// `2κ²m` with `m` the number of stages.
    pub bound: f64,
}

/// `r^(j) = (r^(j-1) + 1) / p^(j)` with `r^(0) = 0`.
pub fn expected_runs(success_probabilities: &[f64], kappa: f64) -> Result<RunModel> {
    let mut runs = Vec::with_capacity(success_probabilities.len());
    let mut r = 0.0;
    for (j, &p) in success_probabilities.iter().enumerate() {
        if !(p > 0.0) {
            return Err(Error::Divergence { stage: j + 1 });
        }
        if p > 1.0 + 1e-12 {
            return Err(Error::arg(format!("probability {p} exceeds 1")));
        }
        r = (r + 1.0) / p;
        runs.push(r);
    }
    Ok(RunModel {
        bound: 2.0 * kappa * kappa * success_probabilities.len() as f64,
        runs,
    })
}

/// The basis, its classical targets and per-state spectral data for one `N`.
#[derive(Clone, Debug)]
pub struct Orthogonalizer {
    basis: BasisMatrix,
    spectral: SpectralInfo,
    oracle: OracleBasis,
    gaps: Vec<Option<SpectralGap>>,
}

/// Deterministic RNG for trial `trial` of basis state `k`.
pub fn trial_rng(seed: u64, k: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((k as u64) << 32) | trial as u64);
    rng
}

impl Orthogonalizer {
    pub fn new(n_qubits: usize) -> Result<Self> {
        let (basis, spectral) = build_basis_matrix(n_qubits)?;
        let oracle = gram_schmidt_with_pivots(basis.columns())?;
        let gaps = (0..basis.dim())
            .map(|k| {
                if k == 0 {
                    Ok(None)
                } else {
                    spectral_gap(&basis.columns()[..k]).map(Some)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Orthogonalizer {
            basis,
            spectral,
            oracle,
            gaps,
        })
    }

    pub fn basis(&self) -> &BasisMatrix {
        &self.basis
    }

    pub fn spectral(&self) -> SpectralInfo {
        self.spectral
    }

    /// Classical targets `t_1 … t_d`.
    pub fn oracle(&self) -> &[QuantumState] {
        &self.oracle.states
    }

    /// `‖(I - 𝒫_k) a_{k+1}‖` for `k = 0 … d-1`.
    pub fn complement_norms(&self) -> &[f64] {
        &self.oracle.pivots
    }

    /// `λ_k` governing basis state `k_plus_1` (0 for the first state).
    pub fn lambda(&self, k_plus_1: usize) -> f64 {
        self.gaps[k_plus_1 - 1].map_or(0.0, |g| g.lambda)
    }

    pub fn m_bound(&self, k_plus_1: usize, epsilon: f64) -> usize {
        match self.gaps[k_plus_1 - 1] {
            None => 0,
            Some(g) => g.m_bound(epsilon, self.spectral.kappa),
        }
    }

    /// Round circuit for basis state `k_plus_1` (`k_plus_1 >= 2`).
    pub fn round_circuit(&self, k_plus_1: usize, strategy: ControlStrategy) -> Result<Circuit> {
        orthogonalization_round_circuit_with(&self.basis.pairings()[..k_plus_1 - 1], strategy)
    }

    fn check_index(&self, k_plus_1: usize) -> Result<()> {
        if k_plus_1 == 0 || k_plus_1 > self.basis.dim() {
            return Err(Error::arg(format!(
                "basis index {k_plus_1} outside 1..={}",
                self.basis.dim()
            )));
        }
        Ok(())
    }

    /// Prepares `u_{k+1}` from `a_{k+1}`.
    ///
    /// `oracle_t` overrides the built-in classical target used for the
    /// infidelity column and oracle-checked stopping.
    pub fn prepare_basis_state(
        &self,
        k_plus_1: usize,
        config: &PreparationConfig,
        oracle_t: Option<&QuantumState>,
    ) -> Result<(QuantumState, PreparationTrace)> {
        config.validate()?;
        if config.n_qubits != self.basis.n_qubits() {
            return Err(Error::arg("config N does not match this orthogonalizer"));
        }
        self.check_index(k_plus_1)?;
        let target = oracle_t.unwrap_or(&self.oracle.states[k_plus_1 - 1]);
        let a = self.basis.column(k_plus_1);
        let k = k_plus_1 - 1;

        if k == 0 {
            let trace = PreparationTrace {
                k: k_plus_1,
                m: 0,
                records: vec![IterationRecord {
                    m: 0,
                    infidelity: infidelity(a, target)?,
                    success_probability: 1.0,
                    expected_runs: 1.0,
                    circuit_runs: 1,
                }],
                total_runs: 1,
                trial_runs: match config.mode {
                    Mode::Exact => Vec::new(),
                    Mode::Sampled => vec![1; config.trials],
                },
            };
            return Ok((a.phase_normalized(), trace));
        }

        let priors = &self.basis.columns()[..k];
        let round = match config.mode {
            Mode::Exact => None,
            Mode::Sampled => Some(self.round_circuit(k_plus_1, config.strategy)?),
        };
        let m_bound = self.m_bound(k_plus_1, config.epsilon);

        let mut state = a.clone();
        let mut probs = Vec::new();
        let mut infids = Vec::new();
        let mut joints = Vec::new();
        let mut stop = None;
        for m in 1..=config.max_m {
            let (raw, p) = match &round {
                None => project_chain(&state, priors)?,
                Some(circuit) => {
                    let joint = pre_measurement_state(circuit, &state)?;
                    let raw = zero_branch(&joint, circuit.n_system)?;
                    joints.push(joint);
                    let p = raw.norm() * raw.norm();
                    (raw, p)
                }
            };
            if p < ZERO_PROBABILITY_GUARD {
                return Err(Error::Divergence { stage: m });
            }
            state = raw.normalize()?;
            probs.push(p);
            let inf = infidelity(&state, target)?;
            infids.push(inf);
            let done = match config.stopping {
                StoppingRule::Oracle => inf < config.epsilon,
                StoppingRule::Bound => m >= m_bound,
            };
            if done {
                stop = Some(m);
                break;
            }
        }

        let model = expected_runs(&probs, self.spectral.kappa)?;
        let mut records: Vec<IterationRecord> = probs
            .iter()
            .zip(&infids)
            .zip(&model.runs)
            .enumerate()
            .map(|(j, ((&p, &inf), &r))| IterationRecord {
                m: j + 1,
                infidelity: inf,
                success_probability: p,
                expected_runs: r,
                circuit_runs: (j + 1) as u64,
            })
            .collect();

        let Some(m) = stop else {
            return Err(Error::Convergence {
                k: k_plus_1,
                max_m: config.max_m,
                trace: Box::new(PreparationTrace {
                    k: k_plus_1,
                    m: config.max_m,
                    total_runs: config.max_m as u64,
                    records,
                    trial_runs: Vec::new(),
                }),
            });
        };

        let (total_runs, trial_runs) = match &round {
            None => (m as u64, Vec::new()),
            Some(circuit) => {
                let outcomes = (0..config.trials)
                    .into_par_iter()
                    .map(|trial| {
                        let mut rng = trial_rng(config.seed, k_plus_1, trial);
                        run_cascade(circuit, &joints[..m], &mut rng)
                    })
                    .collect::<Result<Vec<_>>>()?;
                for (rec, &r) in records.iter_mut().zip(&outcomes[0].1) {
                    rec.circuit_runs = r;
                }
                let trial_runs: Vec<u64> = outcomes.iter().map(|o| o.0).collect();
                (trial_runs[0], trial_runs)
            }
        };
        Ok((
            state.phase_normalized(),
            PreparationTrace {
                k: k_plus_1,
                m,
                records,
                total_runs,
                trial_runs,
            },
        ))
    }

    /// Prepares every basis state in order.
    pub fn prepare_all(&self, config: &PreparationConfig) -> Result<PreparationResult> {
        let mut result = PreparationResult {
            config: config.clone(),
            basis: Vec::new(),
            traces: Vec::new(),
            spectral: self.spectral,
            lambda: Vec::new(),
        };
        for k_plus_1 in 1..=self.basis.dim() {
            match self.prepare_basis_state(k_plus_1, config, None) {
                Ok((u, trace)) => {
                    result.basis.push(u);
                    result.traces.push(trace);
                    result.lambda.push(self.lambda(k_plus_1));
                }
                Err(e) => {
                    return Err(Error::Incomplete {
                        partial: Box::new(result),
                        source: Box::new(e),
                    })
                }
            }
        }
        Ok(result)
    }
}

/// Repeat-until-success over `stages.len()` stages, restarting at stage 1
/// after any nonzero record. Returns the total runs and the cumulative run
/// count at which each stage first succeeded.
fn run_cascade(
    circuit: &Circuit,
    stages: &[QuantumState],
    rng: &mut ChaCha8Rng,
) -> Result<(u64, Vec<u64>)> {
    let mut runs = 0u64;
    let mut stage = 0usize;
    let mut reached = vec![0u64; stages.len()];
    while stage < stages.len() {
        runs += 1;
        if runs > MAX_RUNS_PER_TRIAL {
            return Err(Error::Divergence { stage: stage + 1 });
        }
        let outcome = sample_measurements(circuit, &stages[stage], rng)?;
        if outcome.all_zero() {
            if reached[stage] == 0 {
                reached[stage] = runs;
            }
            stage += 1;
        } else {
            stage = 0;
        }
    }
    Ok((runs, reached))
}

/// Convenience wrapper building the orthogonalizer for `config.n_qubits`.
pub fn prepare_all(config: &PreparationConfig) -> Result<PreparationResult> {
    config.validate()?;
    Orthogonalizer::new(config.n_qubits)?.prepare_all(config)
}
