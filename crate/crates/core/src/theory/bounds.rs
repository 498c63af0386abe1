use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::limits::HorizonLaw;
use crate::error::{domain, Result};
use crate::sampling::{tail_constants, PowerLawSampler, PowerLawSpec};
use crate::seed::chunked_monte_carlo;

/// Slack standing in for the `1 + o(1)` factor of the inverse-moment bound.
pub const INVERSE_MOMENT_SLACK: f64 = 1.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LemmaId {
    /// Total edge count upper bound for `1 < alpha < 2`.
    L31,
    /// Single large draw lower bound for `1 < alpha < 2`.
    L32,
    #[serde(rename = "edge_conc")]
    EdgeConc,
    #[serde(rename = "inv_moment")]
    InvMoment,
    #[serde(rename = "prod_diff")]
    ProdDiff,
}

/// Outcome of one inequality check. `margin >= 0` exactly when `holds`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub lemma_id: LemmaId,
    pub parameters: BTreeMap<String, f64>,
    pub bound_value: f64,
    pub observed_value: f64,
    pub margin: f64,
    pub holds: bool,
}

pub(crate) fn params<const N: usize>(entries: [(&str, f64); N]) -> BTreeMap<String, f64> {
    entries.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

/// `P(X_1 + ... + X_t < z C t^(1/(alpha-1))) > 7/8 - 1/z`, estimated from
/// `n` independent sums. Holds when the estimate minus three binomial
/// standard errors still reaches the bound.
pub fn check_lemma31(alpha: f64, t: u64, z: f64, n: u64, seed: u64) -> Result<BoundVerdict> {
    let constants = tail_constants(alpha, t)?;
    if (t as f64) < constants.min_horizon() {
        return domain(format!("t must be at least {}", constants.min_horizon()));
    }
    if !(z > 0.0) || n == 0 {
        return domain("z and the sample count must be positive");
    }
    let threshold = z * constants.c_of_t * (t as f64).powf(1.0 / (alpha - 1.0));
    let sampler = PowerLawSampler::new(PowerLawSpec::untruncated(alpha)?);
    let below: u64 = chunked_monte_carlo(n, seed, |rng, len| {
        let mut hits = 0_u64;
        for _ in 0..len {
            let mut sum = 0.0;
            let mut under = true;
            for _ in 0..t {
                sum += sampler.sample(rng.random()) as f64;
                if sum >= threshold {
                    under = false;
                    break;
                }
            }
            hits += under as u64;
        }
        hits
    })
    .into_iter()
    .sum();

    let p = below as f64 / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    let bound = 7.0 / 8.0 - 1.0 / z;
    let margin = p - 3.0 * se - bound;
    Ok(BoundVerdict {
        lemma_id: LemmaId::L31,
        parameters: params([
            ("alpha", alpha),
            ("t", t as f64),
            ("z", z),
            ("samples", n as f64),
            ("seed", seed as f64),
            ("threshold", threshold),
            ("std_error", se),
        ]),
        bound_value: bound,
        observed_value: p,
        margin,
        holds: margin >= 0.0,
    })
}

/// `P(X >= gamma C t^(1/(alpha-1))) >= beta (2 gamma C)^(1-alpha) / ((alpha-1) t)`,
/// with the left side computed exactly.
pub fn check_lemma32(alpha: f64, t: u64, gamma: f64) -> Result<BoundVerdict> {
    let constants = tail_constants(alpha, t)?;
    if !(gamma > 0.0) {
        return domain("gamma must be positive");
    }
    let c = constants.c_of_t;
    let y = gamma * c * (t as f64).powf(1.0 / (alpha - 1.0));
    if !(y > 1.0) {
        return domain(format!("gamma C t^(1/(alpha-1)) = {y} must exceed 1"));
    }
    let observed = PowerLawSpec::untruncated(alpha)?.tail_at_least(y);
    let bound = constants.beta * (2.0 * gamma * c).powf(1.0 - alpha) / ((alpha - 1.0) * t as f64);
    Ok(BoundVerdict {
        lemma_id: LemmaId::L32,
        parameters: params([("alpha", alpha), ("t", t as f64), ("gamma", gamma), ("threshold", y)]),
        bound_value: bound,
        observed_value: observed,
        margin: observed - bound,
        holds: observed >= bound,
    })
}

/// Product difference inequality
/// `prod xi - prod zeta <= prod xi * sum_j |1 - zeta_j / xi_j|`,
/// requiring `prod xi >= prod zeta`. Both sides carry rounding error, so the
/// comparison allows a few ulps relative to `prod xi`.
pub fn check_product_inequality(xi: &[f64], zeta: &[f64]) -> Result<bool> {
    let (lhs, rhs, scale) = product_sides(xi, zeta)?;
    Ok(lhs <= rhs + scale)
}

fn product_sides(xi: &[f64], zeta: &[f64]) -> Result<(f64, f64, f64)> {
    if xi.is_empty() || xi.len() != zeta.len() {
        return domain("xi and zeta must be nonempty and of equal length");
    }
    if xi.iter().chain(zeta).any(|&v| !(v > 0.0 && v.is_finite())) {
        return domain("entries must be positive and finite");
    }
    let px: f64 = xi.iter().product();
    let pz: f64 = zeta.iter().product();
    if px < pz {
        return domain("prod xi must be at least prod zeta");
    }
    let sum: f64 = xi.iter().zip(zeta).map(|(x, z)| (1.0 - z / x).abs()).sum();
    let tolerance = 4.0 * xi.len() as f64 * f64::EPSILON * px;
    Ok((px - pz, px * sum, tolerance))
}

/// Result of a randomized sweep of the product inequality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductSweep {
    pub cases: u64,
    pub violations: u64,
    /// Smallest `(rhs - lhs) / prod xi` seen.
    pub worst_relative_margin: f64,
}

impl ProductSweep {
    pub fn verdict(&self, seed: u64) -> BoundVerdict {
        BoundVerdict {
            lemma_id: LemmaId::ProdDiff,
            parameters: params([("cases", self.cases as f64), ("seed", seed as f64)]),
            bound_value: 0.0,
            observed_value: self.violations as f64,
            margin: self.worst_relative_margin,
            holds: self.violations == 0,
        }
    }
}

/// Random vectors of length `1..=20` with entries in `(0, 10)`, swapped so
/// that `prod xi >= prod zeta`.
pub fn product_sweep(cases: u64, seed: u64) -> ProductSweep {
    let parts = chunked_monte_carlo(cases, seed, |rng, len| {
        let mut violations = 0;
        let mut worst = f64::INFINITY;
        for _ in 0..len {
            let n = rng.random_range(1..=20);
            let mut xi: Vec<f64> = (0..n).map(|_| rng.random_range(f64::MIN_POSITIVE..10.0)).collect();
            let mut zeta: Vec<f64> = (0..n).map(|_| rng.random_range(f64::MIN_POSITIVE..10.0)).collect();
            if xi.iter().product::<f64>() < zeta.iter().product::<f64>() {
                std::mem::swap(&mut xi, &mut zeta);
            }
            let (lhs, rhs, tol) = product_sides(&xi, &zeta).expect("valid by construction");
            if lhs > rhs + tol {
                violations += 1;
            }
            let px: f64 = xi.iter().product();
            worst = worst.min((rhs - lhs) / px);
        }
        (violations, worst)
    });
    let (violations, worst) = parts
        .into_iter()
        .fold((0, f64::INFINITY), |(v, w), (cv, cw)| (v + cv, w.min(cw)));
    ProductSweep {
        cases,
        violations,
        worst_relative_margin: worst,
    }
}

/// `E[(Z_1 + ... + Z_s)^(-ell)] <= (1 + o(1)) / (beta'' s ln t)^ell` for the
/// exponent-2 horizon law, with the `1 + o(1)` replaced by a fixed slack.
/// The verdict's observed value is the ratio of the estimate to the bound.
pub fn check_inverse_moments(t: u64, s: u64, ell: u32, n: u64, seed: u64) -> Result<BoundVerdict> {
    if t < 16 {
        return domain("t must be at least 16");
    }
    let tf = t as f64;
    let t0 = tf / tf.ln().ln();
    if !((s as f64) >= t0 && s <= t) {
        return domain(format!("s must lie in [{t0}, {t}]"));
    }
    if !(ell == 1 || ell == 2) {
        return domain("ell must be 1 or 2");
    }
    if n == 0 {
        return domain("sample count must be positive");
    }
    let law = HorizonLaw::new(t)?;
    let sampler = PowerLawSampler::new(law.spec());
    let sums: Vec<f64> = chunked_monte_carlo(n, seed, |rng, len| {
        let mut acc = 0.0;
        for _ in 0..len {
            let total: u64 = (0..s).map(|_| sampler.sample(rng.random())).sum();
            acc += (total as f64).powi(-(ell as i32));
        }
        acc
    });
    let estimate = sums.iter().sum::<f64>() / n as f64;
    let bound = (law.normalizer * s as f64 * tf.ln()).powi(-(ell as i32));
    let ratio = estimate / bound;
    Ok(BoundVerdict {
        lemma_id: LemmaId::InvMoment,
        parameters: params([
            ("t", tf),
            ("s", s as f64),
            ("ell", ell as f64),
            ("samples", n as f64),
            ("seed", seed as f64),
            ("estimate", estimate),
            ("bound", bound),
        ]),
        bound_value: INVERSE_MOMENT_SLACK,
        observed_value: ratio,
        margin: INVERSE_MOMENT_SLACK - ratio,
        holds: ratio < INVERSE_MOMENT_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_draw_tail_examples() {
        for (alpha, t, gamma) in [(1.5, 100, 1.0), (1.9, 10_000, 2.0)] {
            let v = check_lemma32(alpha, t, gamma).unwrap();
            assert!(v.holds && v.margin > 0.0, "{v:?}");
        }
        assert!(check_lemma32(1.5, 100, 1e-12).is_err());
        assert!(check_lemma32(2.0, 100, 1.0).is_err());
    }

    #[test]
    fn edge_total_trivial_bound_and_small_run() {
        let v = check_lemma31(1.5, 50, 8.0 / 7.0, 2_000, 1).unwrap();
        assert!(v.bound_value.abs() < 1e-15);
        assert!(v.holds);
        let v = check_lemma31(1.5, 200, 8.0, 4_000, 2).unwrap();
        assert!(v.holds, "{v:?}");
        assert!(check_lemma31(1.5, 200, 0.0, 10, 2).is_err());
    }

    #[test]
    fn product_equality_cases() {
        assert!(check_product_inequality(&[1.5, 2.0], &[1.5, 2.0]).unwrap());
        assert!(check_product_inequality(&[2.0], &[1.0]).unwrap());
        assert!(check_product_inequality(&[1.0], &[2.0]).is_err());
        assert!(check_product_inequality(&[1.0, -1.0], &[0.5, 0.5]).is_err());
        assert!(check_product_inequality(&[1.0], &[]).is_err());
    }

    #[test]
    fn small_product_sweep() {
        let s = product_sweep(5_000, 3);
        assert_eq!(s.violations, 0);
        assert!(s.worst_relative_margin > -1e-12);
        assert!(s.verdict(3).holds);
    }

    #[test]
    fn inverse_moment_preconditions_and_sanity_cap() {
        assert!(check_inverse_moments(1_000, 10, 1, 10, 0).is_err());
        assert!(check_inverse_moments(1_000, 1_000, 3, 10, 0).is_err());
        let v = check_inverse_moments(1_000, 1_000, 1, 200, 0).unwrap();
        let estimate = v.parameters["estimate"];
        assert!(estimate <= 1.0 / 1_000.0);
        assert!(v.holds, "{v:?}");
    }

    #[test]
    fn verdict_serializes_lemma_names() {
        let v = check_lemma32(1.5, 100, 1.0).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert!(json.contains("\"lemma_id\":\"L32\""));
        assert_eq!(serde_json::to_string(&LemmaId::InvMoment).unwrap(), "\"inv_moment\"");
    }
}
