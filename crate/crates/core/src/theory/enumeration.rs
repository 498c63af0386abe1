use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::process::ParidState;
use crate::sampling::InitialDegreeLaw;
use crate::seed::chunked_monte_carlo;

/// Maximum number of branches the exact expansion may visit.
pub const PATH_LIMIT: f64 = 1e7;

/// Degree multiset, sorted in decreasing order.
pub type DegreeMultiset = Vec<u64>;

/// Exact law of the final degree multiset of a small instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactDistribution {
    pub t: u64,
    pub delta: f64,
    pub probabilities: BTreeMap<DegreeMultiset, f64>,
}

impl ExactDistribution {
    pub fn probability(&self, multiset: &[u64]) -> f64 {
        self.probabilities.get(multiset).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.probabilities.values().sum()
    }
}

fn support(pmf: &[f64]) -> impl Iterator<Item = (u64, f64)> + '_ {
    pmf.iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(i, &p)| (i as u64 + 1, p))
}

fn validate_pmf(pmf: &[f64], delta: f64) -> Result<()> {
    InitialDegreeLaw::finite(pmf.to_vec())?;
    let min = support(pmf).next().map_or(1, |(x, _)| x);
    if !(min as f64 + delta > 0.0) {
        return domain("delta + minimum initial degree must be positive");
    }
    Ok(())
}

/// Number of branches of the unmerged expansion over `(X_1..X_t)` and every
/// per-edge target sequence: `|supp X| * prod_{τ=2}^{t} sum_x τ^x`.
pub fn enumeration_paths(pmf: &[f64], t: u64) -> f64 {
    let xs: Vec<u64> = support(pmf).map(|(x, _)| x).collect();
    let mut paths = xs.len() as f64;
    for tau in 2..=t {
        paths *= xs.iter().map(|&x| (tau as f64).powf(x as f64)).sum::<f64>();
    }
    paths
}

/// Distribution of per-vertex hit counts when `x` edges pick independently
/// from `weights`.
fn hit_distribution(weights: &[f64], x: u64) -> BTreeMap<Vec<u64>, f64> {
    let total: f64 = weights.iter().sum();
    let mut dist = BTreeMap::from([(vec![0_u64; weights.len()], 1.0)]);
    for _ in 0..x {
        let mut next = BTreeMap::new();
        for (hits, p) in dist {
            for (j, w) in weights.iter().enumerate() {
                let mut h = hits.clone();
                h[j] += 1;
                *next.entry(h).or_insert(0.0) += p * w / total;
            }
        }
        dist = next;
    }
    dist
}

/// Exhaustive expansion over every draw of `X_1..X_t` (`pmf[i - 1] = P(X = i)`)
/// and every target of every edge, with merging of equal degree multisets.
pub fn exact_enumeration_oracle(pmf: &[f64], delta: f64, t: u64) -> Result<ExactDistribution> {
    validate_pmf(pmf, delta)?;
    if t == 0 {
        return domain("t must be >= 1");
    }
    let paths = enumeration_paths(pmf, t);
    if paths > PATH_LIMIT {
        return Err(Error::StateSpace {
            paths,
            limit: PATH_LIMIT,
        });
    }

    let mut states: BTreeMap<DegreeMultiset, f64> = BTreeMap::new();
    for (x, p) in support(pmf) {
        *states.entry(vec![x, x]).or_insert(0.0) += p;
    }
    for _ in 2..=t {
        let mut next = BTreeMap::new();
        for (degrees, p_state) in &states {
            let weights: Vec<f64> = degrees.iter().map(|&d| d as f64 + delta).collect();
            for (x, p_x) in support(pmf) {
                for (hits, p_hits) in hit_distribution(&weights, x) {
                    let mut d: Vec<u64> = degrees.iter().zip(&hits).map(|(a, b)| a + b).collect();
                    d.push(x);
                    d.sort_unstable_by(|a, b| b.cmp(a));
                    *next.entry(d).or_insert(0.0) += p_state * p_x * p_hits;
                }
            }
        }
        states = next;
    }
    Ok(ExactDistribution {
        t,
        delta,
        probabilities: states,
    })
}

fn simulate_multiset<R: Rng>(law: &InitialDegreeLaw, delta: f64, t: u64, rng: &mut R) -> Result<DegreeMultiset> {
    let mut state = ParidState::init(law, delta, t, rng)?;
    for _ in 1..t {
        state.step(law, rng)?;
    }
    let mut d = state.degrees().to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    Ok(d)
}

/// Empirical law of the final degree multiset over `n` simulated runs.
pub fn monte_carlo_distribution(
    pmf: &[f64],
    delta: f64,
    t: u64,
    n: u64,
    seed: u64,
) -> Result<BTreeMap<DegreeMultiset, f64>> {
    validate_pmf(pmf, delta)?;
    if t == 0 || n == 0 {
        return domain("t and the sample count must be positive");
    }
    let law = InitialDegreeLaw::finite(pmf.to_vec())?;
    let chunks = chunked_monte_carlo(n, seed, |rng, len| -> Result<BTreeMap<DegreeMultiset, u64>> {
        let mut counts = BTreeMap::new();
        for _ in 0..len {
            *counts.entry(simulate_multiset(&law, delta, t, rng)?).or_insert(0) += 1;
        }
        Ok(counts)
    });
    let mut counts: BTreeMap<DegreeMultiset, u64> = BTreeMap::new();
    for chunk in chunks {
        for (k, c) in chunk? {
            *counts.entry(k).or_insert(0) += c;
        }
    }
    Ok(counts
        .into_iter()
        .map(|(k, c)| (k, c as f64 / n as f64))
        .collect())
}

/// `1/2 Σ |p - q|` over the union of supports.
pub fn total_variation(p: &BTreeMap<DegreeMultiset, f64>, q: &BTreeMap<DegreeMultiset, f64>) -> f64 {
    let mut sum = 0.0;
    for (k, a) in p {
        sum += (a - q.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, b) in q {
        if !p.contains_key(k) {
            sum += b.abs();
        }
    }
    0.5 * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_two_steps() {
        let d = exact_enumeration_oracle(&[1.0], 0.0, 2).unwrap();
        assert_eq!(d.probabilities.len(), 1);
        assert_eq!(d.probability(&[2, 1, 1]), 1.0);
    }

    #[test]
    fn three_steps_split_evenly() {
        let d = exact_enumeration_oracle(&[1.0], 0.0, 3).unwrap();
        assert!((d.probability(&[3, 1, 1, 1]) - 0.5).abs() < 1e-15);
        assert!((d.probability(&[2, 2, 1, 1]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_edge_step_by_hand() {
        // X ≡ 2, t = 2: both edges pick v0 or v1 with probability 1/2 each.
        // Hits (2,0) or (0,2) w.p. 1/2 -> {4,2,2}; (1,1) w.p. 1/2 -> {3,3,2}.
        let d = exact_enumeration_oracle(&[0.0, 1.0], 0.0, 2).unwrap();
        assert!((d.probability(&[4, 2, 2]) - 0.5).abs() < 1e-15);
        assert!((d.probability(&[3, 3, 2]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mass_is_one_at_the_largest_admissible_size() {
        let d = exact_enumeration_oracle(&[0.5, 0.3, 0.2], 0.0, 4).unwrap();
        assert!((d.total_mass() - 1.0).abs() < 1e-12);
        assert_eq!(enumeration_paths(&[0.5, 0.3, 0.2], 4), 137_592.0);
        let d = exact_enumeration_oracle(&[0.5, 0.5], -0.5, 4).unwrap();
        assert!((d.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn state_space_guard() {
        let pmf = vec![0.25; 4];
        assert!(matches!(
            exact_enumeration_oracle(&pmf, 0.0, 6),
            Err(Error::StateSpace { .. })
        ));
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(exact_enumeration_oracle(&[0.5, 0.4], 0.0, 3).is_err());
        assert!(exact_enumeration_oracle(&[1.0], -1.0, 3).is_err());
    }

    #[test]
    fn total_variation_of_disjoint_laws() {
        let p = BTreeMap::from([(vec![1], 1.0)]);
        let q = BTreeMap::from([(vec![2], 1.0)]);
        assert_eq!(total_variation(&p, &q), 1.0);
        assert_eq!(total_variation(&p, &p), 0.0);
    }

    #[test]
    fn monte_carlo_agrees_on_a_small_case() {
        let pmf = [0.7, 0.3];
        let exact = exact_enumeration_oracle(&pmf, 0.0, 3).unwrap();
        let mc = monte_carlo_distribution(&pmf, 0.0, 3, 100_000, 11).unwrap();
        assert!(total_variation(&exact.probabilities, &mc) < 0.02);
    }
}
