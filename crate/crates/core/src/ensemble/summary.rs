use serde::{Deserialize, Serialize};

use super::{EnsembleConfig, ReplicaRecord};
use crate::process::InitialLaw;

/// Linear-interpolation quantile of sorted data (Hyndman–Fan type 7).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    // Shifted by the first value so that identical inputs give an exact mean.
    let shift = values[0];
    let mean = shift + values.iter().map(|v| v - shift).sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Cross-replica statistics of `r_k(τ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryCell {
    pub tau: u64,
    pub k: u64,
    pub mean: f64,
    /// Unbiased (n - 1) standard deviation; 0 for a single replica.
    pub std: f64,
    pub min: f64,
    pub q5: f64,
    pub median: f64,
    pub q95: f64,
    pub max: f64,
}

impl SummaryCell {
    fn new(tau: u64, k: u64, mut values: Vec<f64>) -> Self {
        let (mean, std) = mean_std(&values);
        values.sort_by(f64::total_cmp);
        Self {
            tau,
            k,
            mean,
            std,
            min: values[0],
            q5: quantile(&values, 0.05),
            median: quantile(&values, 0.5),
            q95: quantile(&values, 0.95),
            max: values[values.len() - 1],
        }
    }
}

/// Cross-replica statistics of the edge count at one checkpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeSummary {
    pub tau: u64,
    /// Mean of `L(τ) / τ`.
    pub mean_per_step: f64,
    pub std_per_step: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub law: InitialLaw,
    pub steps: u64,
    pub replicas: usize,
    pub taus: Vec<u64>,
    pub tracked_k: Vec<u64>,
    /// Ordered by `τ`, then by position in `tracked_k`.
    pub cells: Vec<SummaryCell>,
    pub edges: Vec<EdgeSummary>,
    /// Per-replica `max_τ |L(τ) - E[L(τ)]|`, in replica order.
    pub max_edge_deviation: Vec<Option<f64>>,
}

impl EnsembleSummary {
    pub(crate) fn from_records(config: &EnsembleConfig, records: &[ReplicaRecord]) -> Self {
        let taus = config.resolved_checkpoints();
        let mut cells = Vec::with_capacity(taus.len() * config.tracked_k.len());
        let mut edges = Vec::with_capacity(taus.len());
        for (c, &tau) in taus.iter().enumerate() {
            for (j, &k) in config.tracked_k.iter().enumerate() {
                let values = records.iter().map(|r| r.points[c].r[j]).collect();
                cells.push(SummaryCell::new(tau, k, values));
            }
            let per_step: Vec<f64> = records
                .iter()
                .map(|r| r.points[c].edges as f64 / tau as f64)
                .collect();
            let (mean_per_step, std_per_step) = mean_std(&per_step);
            edges.push(EdgeSummary {
                tau,
                mean_per_step,
                std_per_step,
            });
        }
        Self {
            law: config.base.law.clone(),
            steps: config.base.steps,
            replicas: records.len(),
            taus,
            tracked_k: config.tracked_k.clone(),
            cells,
            edges,
            max_edge_deviation: records.iter().map(|r| r.max_edge_deviation).collect(),
        }
    }

    pub fn cell(&self, tau: u64, k: u64) -> Option<&SummaryCell> {
        self.cells.iter().find(|c| c.tau == tau && c.k == k)
    }

    pub fn edge_summary(&self, tau: u64) -> Option<&EdgeSummary> {
        self.edges.iter().find(|e| e.tau == tau)
    }

    /// `std / sqrt(replicas)` of `r_k(τ)`.
    pub fn standard_error(&self, tau: u64, k: u64) -> Option<f64> {
        self.cell(tau, k).map(|c| c.std / (self.replicas as f64).sqrt())
    }
}
