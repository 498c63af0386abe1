use serde::{Deserialize, Serialize};

use super::limits::HorizonLaw;
use crate::error::{domain, Result};
use crate::process::ParidConfig;
use crate::sampling::{InitialDegreeLaw, NeumaierSum};

/// Forward iterate of the expected degree counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanField {
    pub tau: u64,
    /// `expected[k - 1] ≈ E[R_k(τ)]`.
    pub expected: Vec<f64>,
    /// Expected number of vertices of degree above `k_max`.
    pub overflow: f64,
}

impl MeanField {
    pub fn k_max(&self) -> u64 {
        self.expected.len() as u64
    }

    pub fn get(&self, k: u64) -> f64 {
        match k {
            0 => 0.0,
            k if k <= self.k_max() => self.expected[k as usize - 1],
            _ => f64::NAN,
        }
    }

    /// `E[R_k(τ)] / (τ + 1)`.
    pub fn proportion(&self, k: u64) -> f64 {
        self.get(k) / (self.tau + 1) as f64
    }

    /// `Σ_k E[R_k(τ)]` including the overflow bucket.
    pub fn total(&self) -> f64 {
        let mut s: NeumaierSum = self.expected.iter().copied().collect();
        s.add(self.overflow);
        s.value()
    }
}

/// Iterates
/// `E[R_k(τ+1)] = E[R_k(τ)] + (k-1)/2 E[R_{k-1}(τ)]/τ - k/2 E[R_k(τ)]/τ + P(X = k)`
/// from `E[R_k(1)] = 2 P(X = k)` up to `τ = t`, calling `observe` after every step
/// (including `τ = 1`).
///
/// Per-vertex jump rates are capped at 1. The recursion is exact for `X ≡ 1`
/// and a mean-field approximation otherwise.
pub fn mean_field_trajectory<F>(pmf: &[f64], t: u64, k_max: u64, mut observe: F) -> Result<MeanField>
where
    F: FnMut(&MeanField),
{
    if t == 0 {
        return domain("t must be >= 1");
    }
    if k_max == 0 {
        return domain("k_max must be >= 1");
    }
    let k_max = k_max as usize;
    let source: Vec<f64> = (0..k_max).map(|i| pmf.get(i).copied().unwrap_or(0.0)).collect();
    let source_total: f64 = pmf.iter().copied().collect::<NeumaierSum>().value();
    let source_overflow = (source_total - source.iter().copied().collect::<NeumaierSum>().value()).max(0.0);

    let mut state = MeanField {
        tau: 1,
        expected: source.iter().map(|p| 2.0 * p).collect(),
        overflow: 2.0 * source_overflow,
    };
    observe(&state);
    let mut flow = vec![0.0; k_max];
    while state.tau < t {
        let tau = state.tau as f64;
        for (i, f) in flow.iter_mut().enumerate() {
            let rate = ((i + 1) as f64 / (2.0 * tau)).min(1.0);
            *f = rate * state.expected[i];
        }
        for i in 0..k_max {
            let inflow = if i == 0 { 0.0 } else { flow[i - 1] };
            state.expected[i] += inflow - flow[i] + source[i];
        }
        state.overflow += flow[k_max - 1] + source_overflow;
        state.tau += 1;
        observe(&state);
    }
    Ok(state)
}

/// `P(X = 1..=k_max)` followed by the remaining mass.
fn lumped_pmf(pmf: impl Fn(u64) -> f64, k_max: u64) -> Vec<f64> {
    let mut out: Vec<f64> = (1..=k_max).map(pmf).collect();
    let covered: f64 = out.iter().sum();
    out.push((1.0 - covered).max(0.0));
    out
}

/// Mean-field `E[R_k(t)]` for an arbitrary initial-degree law.
pub fn mean_field_from_law(law: &InitialDegreeLaw, t: u64, k_max: u64) -> Result<MeanField> {
    mean_field_trajectory(&lumped_pmf(|i| law.pmf(i), k_max), t, k_max, |_| {})
}

/// Mean-field `E[R_k(t)]` at exponent 2 under the horizon truncation.
pub fn mean_field_expectation(t: u64, k_max: u64) -> Result<MeanField> {
    let law = HorizonLaw::new(t)?;
    mean_field_trajectory(&lumped_pmf(|k| law.pmf(k), k_max), t, k_max, |_| {})
}

/// Mean-field expectation for a simulator configuration; only `δ = 0` is supported.
pub fn mean_field_for_config(config: &ParidConfig) -> Result<MeanField> {
    if config.delta != 0.0 {
        return domain("mean-field targets are only available for delta = 0");
    }
    let law = config.build_law()?;
    mean_field_from_law(&law, config.steps, config.k_max)
}
