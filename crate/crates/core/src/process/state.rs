use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::degree::DegreeSequence;
use super::fenwick::PrefixSumTree;
use crate::error::{domain, Error, Result};
use crate::sampling::InitialDegreeLaw;

/// Weight updates between full rebuilds of the prefix-sum tree.
pub const REBUILD_INTERVAL: u64 = 1 << 20;

/// Largest admissible `Λ`: total endpoints `2Λ` must stay within `i64::MAX`.
const MAX_LAMBDA: u64 = (i64::MAX as u64) / 2;

/// Evolving degree state of one PARID multigraph.
///
/// After step `τ` there are `τ + 1` vertices `v_0..=v_τ`, and the tree holds
/// the attachment weights `d_i(τ) + δ` whose total is `2Λ(τ) + (τ + 1)δ`.
#[derive(Clone, Debug)]
pub struct ParidState {
    step: u64,
    delta: f64,
    degrees: Vec<u64>,
    initial_degrees: Vec<u64>,
    lambda: u64,
    weights: PrefixSumTree,
    updates_since_rebuild: u64,
    hits: Vec<(usize, u64)>,
}

impl ParidState {
    /// Draws `X_1` and joins `v_0`, `v_1` with `X_1` parallel edges.
    pub fn init<R: Rng + ?Sized>(
        law: &InitialDegreeLaw,
        delta: f64,
        steps: u64,
        rng: &mut R,
    ) -> Result<Self> {
        let x1 = law.sample(rng.random());
        Self::with_first_draw(x1, delta, steps)
    }

    /// The state at `τ = 1` with a given `X_1`; `steps` sizes the buffers.
    pub fn with_first_draw(x1: u64, delta: f64, steps: u64) -> Result<Self> {
        if x1 == 0 {
            return domain("initial degree must be positive");
        }
        if !(x1 as f64 + delta > 0.0) {
            return domain("initial attachment weight d + delta must be positive");
        }
        if x1 > MAX_LAMBDA {
            return Err(Error::EdgeOverflow { tau: 1 });
        }
        let capacity = steps.max(1) as usize + 1;
        let mut degrees = Vec::with_capacity(capacity);
        degrees.extend([x1, x1]);
        let mut initial_degrees = Vec::with_capacity(capacity);
        initial_degrees.extend([x1, x1]);
        let mut weights = PrefixSumTree::with_capacity(capacity);
        weights.add(0, x1 as f64 + delta);
        weights.add(1, x1 as f64 + delta);
        Ok(Self {
            step: 1,
            delta,
            degrees,
            initial_degrees,
            lambda: x1,
            weights,
            updates_since_rebuild: 2,
            hits: Vec::new(),
        })
    }

    pub fn step_index(&self) -> u64 {
        self.step
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// `X_i` recorded per vertex; `v_0` and `v_1` both carry `X_1`.
    pub fn initial_degrees(&self) -> &[u64] {
        &self.initial_degrees
    }

    /// `Λ(τ) = X_1 + ... + X_τ`.
    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn vertex_count(&self) -> usize {
        self.degrees.len()
    }

    /// Total attachment weight currently stored in the tree.
    pub fn weight_total(&self) -> f64 {
        self.weights.total()
    }

    /// Probability that an edge of the next step attaches to each existing vertex.
    pub fn target_probabilities(&self) -> Vec<f64> {
        let total = 2.0 * self.lambda as f64 + self.vertex_count() as f64 * self.delta;
        self.degrees
            .iter()
            .map(|&d| (d as f64 + self.delta) / total)
            .collect()
    }

    /// Draws one attachment target from the frozen weights.
    #[inline]
    pub fn sample_target<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.weights
            .select(u * self.weights.total(), self.vertex_count())
    }

    /// Draws `X_τ` from `law` and performs step `τ`.
    pub fn step<R: Rng + ?Sized>(&mut self, law: &InitialDegreeLaw, rng: &mut R) -> Result<()> {
        let x = law.sample(rng.random());
        self.step_with(x, rng)
    }

    /// Step `τ` with a given number of new edges `x`.
    ///
    /// All `x` targets are drawn against the weights of step `τ - 1`; degree
    /// increments and the new vertex are applied only afterwards.
    pub fn step_with<R: Rng + ?Sized>(&mut self, x: u64, rng: &mut R) -> Result<()> {
        let tau = self.step + 1;
        if x == 0 {
            return domain("each new vertex must bring at least one edge");
        }
        let lambda = self
            .lambda
            .checked_add(x)
            .filter(|&l| l <= MAX_LAMBDA)
            .ok_or(Error::EdgeOverflow { tau })?;

        let n = self.vertex_count();
        self.hits.clear();
        if x as u128 > 2 * n as u128 {
            self.place_multinomial(x, rng);
        } else {
            for _ in 0..x {
                let target = self.sample_target(rng);
                self.hits.push((target, 1));
            }
        }

        for &(i, k) in &self.hits {
            self.degrees[i] += k;
            self.weights.add(i, k as f64);
        }
        self.updates_since_rebuild += self.hits.len() as u64 + 1;

        if n >= self.weights.capacity() {
            self.grow();
        }
        self.degrees.push(x);
        self.initial_degrees.push(x);
        self.weights.add(n, x as f64 + self.delta);
        self.lambda = lambda;
        self.step = tau;

        if self.updates_since_rebuild >= REBUILD_INTERVAL {
            self.rebuild_weights();
        }
        Ok(())
    }

    /// Splits `x` edges over the current vertices by sequential conditional
    /// binomials, which realizes the same multinomial law as `x` independent
    /// draws from the frozen weights.
    fn place_multinomial<R: Rng + ?Sized>(&mut self, x: u64, rng: &mut R) {
        let n = self.vertex_count();
        let mut remaining = x;
        let mut remaining_weight =
            2.0 * self.lambda as f64 + n as f64 * self.delta;
        for (i, &d) in self.degrees.iter().enumerate() {
            if remaining == 0 {
                break;
            }
            let w = d as f64 + self.delta;
            let k = if i + 1 == n {
                remaining
            } else {
                let p = (w / remaining_weight).clamp(0.0, 1.0);
                Binomial::new(remaining, p)
                    .expect("p in [0, 1]")
                    .sample(rng)
            };
            if k > 0 {
                self.hits.push((i, k));
            }
            remaining -= k;
            remaining_weight -= w;
        }
    }

    fn grow(&mut self) {
        let capacity = (self.weights.capacity() * 2).max(4);
        self.weights = PrefixSumTree::with_capacity(capacity);
        self.rebuild_weights();
    }

    fn rebuild_weights(&mut self) {
        let delta = self.delta;
        self.weights
            .rebuild(self.degrees.iter().map(|&d| d as f64 + delta));
        self.updates_since_rebuild = 0;
    }

    pub fn degree_sequence(&self, k_max: u64) -> DegreeSequence {
        DegreeSequence::from_degrees(self.step, &self.degrees, k_max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn forced_first_draw() {
        let s = ParidState::with_first_draw(3, 0.0, 10).unwrap();
        assert_eq!(s.degrees(), &[3, 3]);
        assert_eq!(s.lambda(), 3);
        assert_eq!(s.step_index(), 1);
        assert_eq!(s.degree_sequence(5).proportion(3), 1.0);
        assert_eq!(s.target_probabilities(), vec![0.5, 0.5]);
    }

    #[test]
    fn probabilities_before_step_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = ParidState::with_first_draw(1, 0.0, 3).unwrap();
        s.step_with(1, &mut rng).unwrap();
        let mut sorted = s.degrees().to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 1, 2]);
        let p = s.target_probabilities();
        let expect: Vec<f64> = s.degrees().iter().map(|&d| d as f64 / 4.0).collect();
        assert_eq!(p, expect);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn delta_one_probabilities() {
        let s = ParidState::with_first_draw(1, 1.0, 3).unwrap();
        assert_eq!(s.target_probabilities(), vec![0.5, 0.5]);
        assert_eq!(s.weight_total(), 4.0);
    }

    #[test]
    fn invariants_hold_through_many_steps() {
        let law = InitialDegreeLaw::finite(vec![0.5, 0.3, 0.2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut s = ParidState::init(&law, 0.5, 2000, &mut rng).unwrap();
        for _ in 0..2000 {
            s.step(&law, &mut rng).unwrap();
            let tau = s.step_index();
            assert_eq!(s.vertex_count() as u64, tau + 1);
            assert_eq!(s.degrees().iter().sum::<u64>(), 2 * s.lambda());
            let expect = 2.0 * s.lambda() as f64 + (tau + 1) as f64 * 0.5;
            assert!((s.weight_total() - expect).abs() < 1e-9 * expect);
        }
        assert_eq!(s.initial_degrees().iter().skip(1).sum::<u64>(), s.lambda());
    }

    #[test]
    fn huge_batch_uses_multinomial_and_keeps_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut s = ParidState::with_first_draw(2, 0.0, 10).unwrap();
        s.step_with(1_000_000_000, &mut rng).unwrap();
        assert_eq!(s.degrees().iter().sum::<u64>(), 2 * s.lambda());
        assert_eq!(s.degrees()[2], 1_000_000_000);
        let d0 = s.degrees()[0] as f64 - 2.0;
        assert!((d0 / 1e9 - 0.5).abs() < 1e-3);
    }

    #[test]
    fn overflow_reports_step() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut s = ParidState::with_first_draw(1, 0.0, 10).unwrap();
        s.step_with(2, &mut rng).unwrap();
        match s.step_with(u64::MAX, &mut rng) {
            Err(Error::EdgeOverflow { tau }) => assert_eq!(tau, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grows_past_initial_capacity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut s = ParidState::with_first_draw(1, 0.0, 1).unwrap();
        for _ in 0..100 {
            s.step_with(1, &mut rng).unwrap();
        }
        assert_eq!(s.vertex_count(), 102);
        assert_eq!(s.weight_total(), 2.0 * s.lambda() as f64);
    }
}
