//! Independent replicas of one configuration and the cross-replica
//! diagnostics built on them.
//!
//! Replica `i` runs with seed `derive_seed(master_seed, i)`; summaries are
//! aggregated in replica order, so results do not depend on `parallelism`.

mod diagnostics;
mod summary;

use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use diagnostics::{
    concentration_diagnostic, edge_trace_check, ConcentrationEntry, ConcentrationReport,
    ConcentrationVerdict, EDGE_BAND, EDGE_EVENT_FRACTION,
};
pub use summary::{quantile, EdgeSummary, EnsembleSummary, SummaryCell};

use crate::error::{domain, Error, Result};
use crate::process::{run_with_law, ParidConfig, RunOutput};
use crate::seed::derive_seed;

/// Std-ratio thresholds separating concentrating from non-concentrating `r_k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DichotomyThresholds {
    /// Ratios below this are "concentrating".
    pub concentrating: f64,
    /// Ratios above this are "non-concentrating".
    pub non_concentrating: f64,
}

impl Default for DichotomyThresholds {
    fn default() -> Self {
        Self {
            concentrating: 0.5,
            non_concentrating: 0.7,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    /// Shared configuration; its `seed` and `checkpoints` are ignored.
    pub base: ParidConfig,
    pub replicas: usize,
    pub master_seed: u64,
    pub parallelism: usize,
    pub tracked_k: Vec<u64>,
    /// Summary checkpoints; the final step is always added.
    pub checkpoints: Vec<u64>,
    #[serde(default)]
    pub thresholds: DichotomyThresholds,
}

impl EnsembleConfig {
    pub fn new(base: ParidConfig, replicas: usize, master_seed: u64) -> Self {
        Self {
            base,
            replicas,
            master_seed,
            parallelism: 1,
            tracked_k: vec![1, 2, 3],
            checkpoints: Vec::new(),
            thresholds: DichotomyThresholds::default(),
        }
    }

    pub fn with_parallelism(mut self, parallelism: usize) -> Self {
        self.parallelism = parallelism;
        self
    }

    pub fn with_tracked_k(mut self, tracked_k: Vec<u64>) -> Self {
        self.tracked_k = tracked_k;
        self
    }

    pub fn with_checkpoints(mut self, checkpoints: Vec<u64>) -> Self {
        self.checkpoints = checkpoints;
        self
    }

    pub fn with_thresholds(mut self, thresholds: DichotomyThresholds) -> Self {
        self.thresholds = thresholds;
        self
    }

    /// Seed of replica `i`.
    pub fn replica_seed(&self, i: usize) -> u64 {
        derive_seed(self.master_seed, i as u64)
    }

    /// Sorted checkpoints including the final step.
    pub fn resolved_checkpoints(&self) -> Vec<u64> {
        let mut cps = self.checkpoints.clone();
        cps.push(self.base.steps);
        cps.sort_unstable();
        cps.dedup();
        cps
    }

    fn run_config(&self) -> ParidConfig {
        self.base.clone().with_checkpoints(self.resolved_checkpoints())
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicas == 0 {
            return domain("replicas must be >= 1");
        }
        if self.parallelism == 0 {
            return domain("parallelism must be >= 1");
        }
        if self.tracked_k.is_empty() {
            return domain("tracked_k must be nonempty");
        }
        if let Some(&k) = self.tracked_k.iter().find(|&&k| k == 0 || k > self.base.k_max) {
            return domain(format!("tracked k = {k} outside [1, {}]", self.base.k_max));
        }
        self.run_config().validate()
    }
}

/// One replica's tracked observables at one checkpoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicaPoint {
    pub tau: u64,
    /// `L(τ)`.
    pub edges: u64,
    /// `r_k(τ)` aligned with `tracked_k`.
    pub r: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicaRecord {
    pub replica: usize,
    pub seed: u64,
    pub points: Vec<ReplicaPoint>,
    /// `max_τ |L(τ) - τ E[X]|` over the whole run.
    pub max_edge_deviation: Option<f64>,
}

impl ReplicaRecord {
    fn from_run(replica: usize, tracked_k: &[u64], out: RunOutput) -> Self {
        let points = out
            .checkpoints
            .iter()
            .zip(&out.edge_trace)
            .map(|(seq, trace)| ReplicaPoint {
                tau: seq.t,
                edges: trace.edges,
                r: tracked_k.iter().map(|&k| seq.proportion(k)).collect(),
            })
            .collect();
        Self {
            replica,
            seed: out.seed,
            points,
            max_edge_deviation: out.max_edge_deviation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleOutput {
    pub summary: EnsembleSummary,
    pub records: Vec<ReplicaRecord>,
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "worker panicked".to_owned())
}

/// Runs every replica on a pool of `parallelism` workers. Any failed replica
/// aborts the ensemble with a manifest of completed and failed indices.
pub fn run_ensemble(config: &EnsembleConfig) -> Result<EnsembleOutput> {
    config.validate()?;
    let run_config = config.run_config();
    let law = run_config.build_law()?;
    run_config.validate_with(&law)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| Error::ResourceGuard(format!("cannot start worker pool: {e}")))?;
    let results: Vec<std::result::Result<ReplicaRecord, String>> = pool.install(|| {
        (0..config.replicas)
            .into_par_iter()
            .map(|i| {
                let seed = config.replica_seed(i);
                catch_unwind(AssertUnwindSafe(|| run_with_law(&run_config, &law, seed)))
                    .map_err(panic_message)
                    .and_then(|r| r.map_err(|e| e.to_string()))
                    .map(|out| ReplicaRecord::from_run(i, &config.tracked_k, out))
            })
            .collect()
    });

    let mut records = Vec::with_capacity(config.replicas);
    let mut completed = Vec::new();
    let mut failed = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(rec) => {
                completed.push(i);
                records.push(rec);
            }
            Err(msg) => failed.push((i, msg)),
        }
    }
    if !failed.is_empty() {
        return Err(Error::Ensemble {
            total: config.replicas,
            completed,
            failed,
        });
    }
    let summary = EnsembleSummary::from_records(config, &records);
    Ok(EnsembleOutput { summary, records })
}
