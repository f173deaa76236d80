//! Experiment drivers behind the command-line tool and their serialized
//! outputs.

mod emit;
mod svg;
mod verify;

pub use emit::*;
pub use svg::*;
pub use verify::*;

use serde::{Deserialize, Serialize};

use crate::circuit::ControlStrategy;
use crate::error::{Error, Result};
use crate::orthogonalizer::{
    Orthogonalizer, PreparationConfig, PreparationResult, ResultDocument,
};

/// One `(k, m)` point of an exact or sampled preparation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfidelityRow {
    pub k: usize,
    pub m: usize,
    pub infidelity: f64,
    pub success_probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrepareReport {
    pub rows: Vec<InfidelityRow>,
    pub result: ResultDocument,
}

pub fn infidelity_rows(result: &PreparationResult) -> Vec<InfidelityRow> {
    result
        .traces
        .iter()
        .flat_map(|t| {
            t.records.iter().map(move |r| InfidelityRow {
                k: t.k,
                m: r.m,
                infidelity: r.infidelity,
                success_probability: r.success_probability,
            })
        })
        .collect()
}

pub fn run_prepare_experiment(config: &PreparationConfig) -> Result<PrepareReport> {
    config.validate()?;
    let result = Orthogonalizer::new(config.n_qubits)?.prepare_all(config)?;
    Ok(PrepareReport {
        rows: infidelity_rows(&result),
        result: result.document(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub n_qubits: usize,
    pub epsilons: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub strategy: ControlStrategy,
}

pub const MIN_SWEEP_EPSILONS: usize = 3;
pub const MIN_SWEEP_TRIALS: usize = 100;

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.epsilons.len() < MIN_SWEEP_EPSILONS {
            return Err(Error::arg(format!(
                "a sweep needs at least {MIN_SWEEP_EPSILONS} epsilon values"
            )));
        }
        if self.trials < MIN_SWEEP_TRIALS {
            return Err(Error::arg(format!(
                "a sweep needs at least {MIN_SWEEP_TRIALS} trials per point"
            )));
        }
        Ok(())
    }

    /// Seed for the `index`-th epsilon so that points draw independent
    /// streams.
    pub fn point_seed(&self, index: usize) -> u64 {
        self.seed
            .wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub k: usize,
    /// Stages needed to reach `epsilon`.
    pub m: usize,
    pub mean_runs: f64,
    pub stderr: f64,
    pub trials: usize,
    /// Mean runs predicted from the stage success probabilities.
    pub model_runs: f64,
    /// `2κ² · max(m_bound(ε), 1)`.
    pub bound: f64,
}

/// Least-squares line `y = slope · x + intercept` with residuals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineFit {
    pub slope: f64,
    pub intercept: f64,
    /// `None` when the data have zero variance.
    pub r_squared: Option<f64>,
    pub residuals: Vec<f64>,
    pub max_abs_residual: f64,
}

pub fn affine_fit(xs: &[f64], ys: &[f64]) -> Result<AffineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::arg("affine fit needs two or more paired points"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::arg("affine fit needs distinct x values"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| y - (slope * x + intercept))
        .collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    Ok(AffineFit {
        slope,
        intercept,
        r_squared: (ss_tot > 0.0).then(|| 1.0 - ss_res / ss_tot),
        max_abs_residual: residuals.iter().fold(0.0, |a, r| a.max(r.abs())),
        residuals,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepFit {
    pub k: usize,
    pub fit: AffineFit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub kappa: f64,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
    /// Mean runs against `ln(1/ε)`, one per basis index.
    pub fits: Vec<SweepFit>,
}

impl SweepReport {
    pub fn rows_for(&self, k: usize) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.k == k)
    }
}

pub fn run_sweep_experiment(spec: &SweepSpec) -> Result<SweepReport> {
    spec.validate()?;
    let orth = Orthogonalizer::new(spec.n_qubits)?;
    let kappa = orth.spectral().kappa;
    let mut rows = Vec::new();
    for (i, &epsilon) in spec.epsilons.iter().enumerate() {
        let mut config =
            PreparationConfig::new(spec.n_qubits, epsilon).sampled(spec.trials, spec.point_seed(i));
        config.strategy = spec.strategy;
        let result = orth.prepare_all(&config)?;
        for trace in &result.traces {
            let m_bound = orth.m_bound(trace.k, epsilon).max(1);
            rows.push(SweepRow {
                epsilon,
                k: trace.k,
                m: trace.m,
                mean_runs: trace.mean_runs(),
                stderr: trace.stderr_runs(),
                trials: trace.trial_runs.len(),
                model_runs: trace.records.last().map_or(1.0, |r| r.expected_runs),
                bound: 2.0 * kappa * kappa * m_bound as f64,
            });
        }
    }
    let dim = orth.basis().dim();
    let fits = (1..=dim)
        .map(|k| {
            let (xs, ys): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|r| r.k == k)
                .map(|r| ((1.0 / r.epsilon).ln(), r.mean_runs))
                .unzip();
            Ok(SweepFit {
                k,
                fit: affine_fit(&xs, &ys)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        n: spec.n_qubits,
        kappa,
        seed: spec.seed,
        rows,
        fits,
    })
}
