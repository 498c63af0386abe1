use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use parid::ensemble::{quantile, run_ensemble, EnsembleConfig};
use parid::process::{run, ParidConfig, ParidState, PrefixSumTree, Truncation};
use parid::sampling::{InitialDegreeLaw, PowerLawSampler, PowerLawSpec};
use parid::theory::{check_product_inequality, exact_enumeration_oracle, mean_field_trajectory};

fn pmf_strategy(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0_f64..1.0, 1..=max_len).prop_filter_map("positive mass", |w| {
        let total: f64 = w.iter().sum();
        (total > 1e-3).then(|| w.iter().map(|x| x / total).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampler_is_monotone_and_matches_cdf(alpha in 1.1_f64..3.0, cap in 1_u64..5_000, u1 in 0.0_f64..1.0, u2 in 0.0_f64..1.0) {
        let spec = PowerLawSpec::truncated(alpha, cap).unwrap();
        let s = PowerLawSampler::new(spec.clone());
        let (lo, hi) = if u1 <= u2 { (u1, u2) } else { (u2, u1) };
        let (a, b) = (s.sample(lo), s.sample(hi));
        prop_assert!(a <= b);
        prop_assert!((1..=cap).contains(&b));
        // Inverse CDF: cdf(k - 1) < u <= cdf(k), up to rounding of the table.
        prop_assert!(spec.cdf(b) >= hi - 1e-12);
        prop_assert!(spec.cdf(b - 1) < hi + 1e-12);
    }

    #[test]
    fn untruncated_sampler_is_monotone(alpha in 1.2_f64..2.5, u1 in 0.0_f64..0.999_999, u2 in 0.0_f64..0.999_999) {
        let s = PowerLawSampler::new(PowerLawSpec::untruncated(alpha).unwrap());
        let (lo, hi) = if u1 <= u2 { (u1, u2) } else { (u2, u1) };
        prop_assert!(s.sample(lo) <= s.sample(hi));
    }

    #[test]
    fn handshake_and_vertex_count(pmf in pmf_strategy(4), delta in 0.0_f64..3.0, steps in 1_u64..300, seed: u64) {
        let law = InitialDegreeLaw::finite(pmf).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = ParidState::init(&law, delta, steps, &mut rng).unwrap();
        while s.step_index() < steps {
            s.step(&law, &mut rng).unwrap();
        }
        prop_assert_eq!(s.vertex_count() as u64, steps + 1);
        prop_assert_eq!(s.degrees().iter().sum::<u64>(), 2 * s.lambda());
        prop_assert!(s.degrees().iter().all(|&d| d >= 1));
        let p: f64 = s.target_probabilities().iter().sum();
        prop_assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn proportions_sum_to_one_with_overflow(steps in 1_u64..2_000, k_max in 1_u64..30, seed: u64) {
        let cfg = ParidConfig::power_law(2.0, Truncation::HorizonAlphaEq2, steps.max(3))
            .with_seed(seed)
            .with_k_max(k_max);
        let s = run(&cfg).unwrap().final_sequence;
        let total: f64 = (1..=k_max).map(|k| s.proportion(k)).sum::<f64>() + s.overflow_proportion();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert_eq!(s.cumulative(k_max) + s.overflow, s.vertices());
    }

    #[test]
    fn product_inequality_holds(pairs in prop::collection::vec((1e-3_f64..10.0, 1e-3_f64..10.0), 1..20)) {
        let (mut xi, mut zeta): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        if xi.iter().product::<f64>() < zeta.iter().product::<f64>() {
            std::mem::swap(&mut xi, &mut zeta);
        }
        prop_assert!(check_product_inequality(&xi, &zeta).unwrap());
    }

    #[test]
    fn enumeration_mass_is_one(pmf in pmf_strategy(3), delta in 0.0_f64..2.0, t in 1_u64..=4) {
        let d = exact_enumeration_oracle(&pmf, delta, t).unwrap();
        prop_assert!((d.total_mass() - 1.0).abs() < 1e-12);
        for multiset in d.probabilities.keys() {
            prop_assert_eq!(multiset.len() as u64, t + 1);
            prop_assert_eq!(multiset.iter().sum::<u64>() % 2, 0);
        }
    }

    #[test]
    fn mean_field_conserves_vertices(pmf in pmf_strategy(6), t in 1_u64..500, k_max in 1_u64..40) {
        let mut worst: f64 = 0.0;
        mean_field_trajectory(&pmf, t, k_max, |m| {
            worst = worst.max((m.total() - (m.tau + 1) as f64).abs());
            assert!(m.expected.iter().all(|&e| e >= -1e-12));
        }).unwrap();
        prop_assert!(worst < 1e-9);
    }

    #[test]
    fn prefix_tree_selects_like_a_linear_scan(weights in prop::collection::vec(0.0_f64..10.0, 1..200), frac in 0.0_f64..1.0) {
        let mut tree = PrefixSumTree::with_capacity(weights.len());
        tree.rebuild(weights.iter().copied());
        let total: f64 = weights.iter().sum();
        prop_assume!(total > 0.0);
        let target = frac * tree.total();
        let idx = tree.select(target, weights.len());
        let tol = 1e-9 * total;
        let before: f64 = weights[..idx].iter().sum();
        prop_assert!(before <= target + tol);
        prop_assert!(before + weights[idx] > target - tol || idx == weights.len() - 1);
    }

    #[test]
    fn quantiles_are_ordered(mut v in prop::collection::vec(0.0_f64..1.0, 1..100)) {
        v.sort_by(f64::total_cmp);
        let q: Vec<f64> = [0.0, 0.05, 0.5, 0.95, 1.0].iter().map(|&p| quantile(&v, p)).collect();
        prop_assert!(q.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(q[0], v[0]);
        prop_assert_eq!(q[4], v[v.len() - 1]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn ensemble_summary_invariants(seed: u64, replicas in 1_usize..6) {
        let base = ParidConfig::power_law(2.0, Truncation::HorizonAlphaEq2, 500).with_k_max(20);
        let cfg = EnsembleConfig::new(base, replicas, seed).with_checkpoints(vec![50]);
        let out = run_ensemble(&cfg).unwrap();
        for c in &out.summary.cells {
            prop_assert!(c.std >= 0.0);
            prop_assert!(c.min <= c.q5 && c.q5 <= c.median && c.median <= c.q95 && c.q95 <= c.max);
            prop_assert!((0.0..=1.0).contains(&c.min) && c.max <= 1.0);
        }
    }
}
