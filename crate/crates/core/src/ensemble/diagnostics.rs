use serde::{Deserialize, Serialize};

use super::{DichotomyThresholds, EnsembleSummary};
use crate::error::{domain, Result};
use crate::process::{InitialLaw, Truncation};
use crate::theory::{params, BoundVerdict, HorizonLaw, LemmaId};

/// Allowed relative deviation of the mean edge count from `τ β'' ln t`.
pub const EDGE_BAND: f64 = 0.25;
/// Required fraction of replicas whose edge counts stay near their expectation.
pub const EDGE_EVENT_FRACTION: f64 = 0.95;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConcentrationVerdict {
    Concentrating,
    NonConcentrating,
    Inconclusive,
    /// The spread at the earlier checkpoint is zero.
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationEntry {
    pub k: u64,
    pub std_early: f64,
    pub std_late: f64,
    /// `std(r_k(τ2)) / std(r_k(τ1))`, absent when degenerate.
    pub std_ratio: Option<f64>,
    pub verdict: ConcentrationVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub tau_early: u64,
    pub tau_late: u64,
    pub thresholds: DichotomyThresholds,
    pub entries: Vec<ConcentrationEntry>,
}

impl ConcentrationReport {
    pub fn entry(&self, k: u64) -> Option<&ConcentrationEntry> {
        self.entries.iter().find(|e| e.k == k)
    }
}

/// Compares the cross-replica spread of each tracked `r_k` at two checkpoints.
pub fn concentration_diagnostic(
    summary: &EnsembleSummary,
    tau_early: u64,
    tau_late: u64,
    thresholds: DichotomyThresholds,
) -> Result<ConcentrationReport> {
    for tau in [tau_early, tau_late] {
        if !summary.taus.contains(&tau) {
            return domain(format!("checkpoint {tau} is not in the summary"));
        }
    }
    let entries = summary
        .tracked_k
        .iter()
        .map(|&k| {
            let std_early = summary.cell(tau_early, k).expect("tracked").std;
            let std_late = summary.cell(tau_late, k).expect("tracked").std;
            let (std_ratio, verdict) = if std_early > 0.0 {
                let ratio = std_late / std_early;
                let verdict = if ratio < thresholds.concentrating {
                    ConcentrationVerdict::Concentrating
                } else if ratio > thresholds.non_concentrating {
                    ConcentrationVerdict::NonConcentrating
                } else {
                    ConcentrationVerdict::Inconclusive
                };
                (Some(ratio), verdict)
            } else {
                (None, ConcentrationVerdict::Degenerate)
            };
            ConcentrationEntry {
                k,
                std_early,
                std_late,
                std_ratio,
                verdict,
            }
        })
        .collect();
    Ok(ConcentrationReport {
        tau_early,
        tau_late,
        thresholds,
        entries,
    })
}

/// Edge-count law at exponent 2 under the horizon truncation.
///
/// For every checkpoint `τ >= t / ln ln t` the ensemble mean of
/// `L(τ) / (τ β'' ln t)` must lie within `1 ± EDGE_BAND`, and at least
/// `EDGE_EVENT_FRACTION` of the replicas must keep `|L(τ) - E[L(τ)]|` below
/// `t (ln t)^(2/3)` at every step.
pub fn edge_trace_check(summary: &EnsembleSummary) -> Result<BoundVerdict> {
    let supported = matches!(
        summary.law,
        InitialLaw::PowerLaw { alpha, truncation: Truncation::HorizonAlphaEq2 } if alpha == 2.0
    );
    if !supported {
        return domain("edge trace check needs alpha = 2 with the horizon truncation");
    }
    let t = summary.steps;
    let tf = t as f64;
    let law = HorizonLaw::new(t)?;
    let scale = law.normalizer * tf.ln();
    let t0 = tf / tf.ln().ln();

    let mut worst_ratio = 1.0_f64;
    let mut checked = 0;
    for e in summary.edges.iter().filter(|e| e.tau as f64 >= t0) {
        let ratio = e.mean_per_step / scale;
        if (ratio - 1.0).abs() > (worst_ratio - 1.0).abs() {
            worst_ratio = ratio;
        }
        checked += 1;
    }
    let window = tf * tf.ln().powf(2.0 / 3.0);
    let inside = summary
        .max_edge_deviation
        .iter()
        .filter(|d| d.is_some_and(|d| d <= window))
        .count();
    let fraction = inside as f64 / summary.replicas as f64;

    let band_margin = EDGE_BAND - (worst_ratio - 1.0).abs();
    let event_margin = fraction - EDGE_EVENT_FRACTION;
    Ok(BoundVerdict {
        lemma_id: LemmaId::EdgeConc,
        parameters: params([
            ("t", tf),
            ("replicas", summary.replicas as f64),
            ("checkpoints_checked", checked as f64),
            ("event_fraction", fraction),
            ("event_window", window),
            ("band_margin", band_margin),
            ("event_margin", event_margin),
        ]),
        bound_value: EDGE_BAND,
        observed_value: worst_ratio,
        margin: band_margin.min(event_margin),
        holds: band_margin >= 0.0 && event_margin >= 0.0,
    })
}
