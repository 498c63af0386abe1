//! The PARID multigraph generator.
//!
//! Vertex `v_τ` arrives at step `τ` with `X_τ` edges. Each edge independently
//! picks an existing vertex `v_i` with probability
//! `(d_i(τ-1) + δ) / (2Λ(τ-1) + τδ)`; the step's edges do not see each other.
//! Only degrees are kept, never the edge list.

mod config;
mod degree;
mod fenwick;
mod state;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use config::{InitialLaw, ParidConfig, Truncation, DEFAULT_ENDPOINT_LIMIT};
pub use degree::DegreeSequence;
pub use fenwick::PrefixSumTree;
pub use state::{ParidState, REBUILD_INTERVAL};

use crate::error::Result;
use crate::sampling::InitialDegreeLaw;

/// Generator used for every simulation stream.
pub type SimRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeTracePoint {
    pub tau: u64,
    /// `L(τ) = Λ(τ)`, the number of edges after step `τ`.
    pub edges: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub seed: u64,
    pub final_sequence: DegreeSequence,
    /// One snapshot per configured checkpoint, in increasing `τ`.
    pub checkpoints: Vec<DegreeSequence>,
    /// `L(τ)` at each checkpoint and at the final step.
    pub edge_trace: Vec<EdgeTracePoint>,
    /// `max_τ |L(τ) - τ E[X]|` over every step, when `E[X]` is finite.
    pub max_edge_deviation: Option<f64>,
}

/// Runs one simulation; deterministic in `(config, config.seed)`.
pub fn run(config: &ParidConfig) -> Result<RunOutput> {
    let law = config.build_law()?;
    config.validate_with(&law)?;
    run_with_law(config, &law, config.seed)
}

/// Runs with a prebuilt law and an explicit seed; the caller is responsible
/// for having validated `config` against `law`.
pub fn run_with_law(config: &ParidConfig, law: &InitialDegreeLaw, seed: u64) -> Result<RunOutput> {
    let mut rng = SimRng::seed_from_u64(seed);
    let mean = law.mean();
    let mut state = ParidState::init(law, config.delta, config.steps, &mut rng)?;

    let mut checkpoints = Vec::with_capacity(config.checkpoints.len());
    let mut edge_trace = Vec::with_capacity(config.checkpoints.len() + 1);
    let mut pending = config.checkpoints.iter().copied().peekable();
    let mut max_dev: f64 = 0.0;

    loop {
        let tau = state.step_index();
        if let Some(m) = mean {
            max_dev = max_dev.max((state.lambda() as f64 - tau as f64 * m).abs());
        }
        if pending.peek() == Some(&tau) {
            pending.next();
            checkpoints.push(state.degree_sequence(config.k_max));
            edge_trace.push(EdgeTracePoint {
                tau,
                edges: state.lambda(),
            });
        }
        if tau >= config.steps {
            break;
        }
        state.step(law, &mut rng)?;
    }

    if edge_trace.last().map(|p| p.tau) != Some(config.steps) {
        edge_trace.push(EdgeTracePoint {
            tau: config.steps,
            edges: state.lambda(),
        });
    }

    Ok(RunOutput {
        seed,
        final_sequence: state.degree_sequence(config.k_max),
        checkpoints,
        edge_trace,
        max_edge_deviation: mean.map(|_| max_dev),
    })
}
