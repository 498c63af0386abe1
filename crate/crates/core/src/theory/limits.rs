use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::sampling::{beta_normalizer, truncation_point, NeumaierSum, PowerLawSpec};

/// `sum_{i=1}^{m} (1 + 1/i) = m + H_m`.
fn harmonic_weight(m: u64) -> f64 {
    (1..=m)
        .rev()
        .map(|i| 1.0 + 1.0 / i as f64)
        .collect::<NeumaierSum>()
        .value()
}

fn cubic(k: u64) -> f64 {
    let k = k as f64;
    k * (k + 1.0) * (k + 2.0)
}

/// Limit proportion of degree-`k` vertices at exponent 2:
/// `b_k = 2 beta(2) / (k (k+1) (k+2)) * sum_{i=1}^{k} (1 + 1/i)`.
pub fn b_k(k: u64) -> f64 {
    assert!(k >= 1, "b_k is defined for k >= 1");
    let beta = beta_normalizer(2.0).expect("alpha = 2 is valid");
    2.0 * beta * harmonic_weight(k) / cubic(k)
}

/// `b_1..=b_kmax`.
pub fn b_table(k_max: u64) -> Vec<f64> {
    let beta = beta_normalizer(2.0).expect("alpha = 2 is valid");
    let mut weight = 0.0;
    (1..=k_max)
        .map(|k| {
            weight += 1.0 + 1.0 / k as f64;
            2.0 * beta * weight / cubic(k)
        })
        .collect()
}

/// The exponent-2 law truncated below `t ln ln t + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorizonLaw {
    pub t: u64,
    /// Inclusive cap `ceil(t ln ln t)`.
    pub cap: u64,
    /// `beta''(t)`.
    pub normalizer: f64,
}

impl HorizonLaw {
    pub fn new(t: u64) -> Result<Self> {
        let cap = truncation_point(2.0, t)?;
        let spec = PowerLawSpec::truncated(2.0, cap)?;
        Ok(Self {
            t,
            cap,
            normalizer: spec.normalizer(),
        })
    }

    pub fn spec(&self) -> PowerLawSpec {
        PowerLawSpec::truncated(2.0, self.cap).expect("validated at construction")
    }

    /// `P(Z = k)`.
    pub fn pmf(&self, k: u64) -> f64 {
        if k == 0 || k > self.cap {
            0.0
        } else {
            self.normalizer / (k as f64 * k as f64)
        }
    }

    /// `b'_k(t) = 2 beta'' / (k (k+1) (k+2)) * sum_{i=1}^{min(k, cap)} (1 + 1/i)`; `b'_0 = 0`.
    pub fn b_prime(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        2.0 * self.normalizer * harmonic_weight(k.min(self.cap)) / cubic(k)
    }

    /// `b'_1..=b'_kmax`.
    pub fn b_prime_table(&self, k_max: u64) -> Vec<f64> {
        let mut weight = 0.0;
        (1..=k_max)
            .map(|k| {
                if k <= self.cap {
                    weight += 1.0 + 1.0 / k as f64;
                }
                2.0 * self.normalizer * weight / cubic(k)
            })
            .collect()
    }

    /// `b'_k - ((k-1)/2 b'_{k-1} - k/2 b'_k + P(Z = k))`.
    pub fn recursion_residual(&self, k: u64, b_prev: f64, b_cur: f64) -> f64 {
        let kf = k as f64;
        b_cur - ((kf - 1.0) / 2.0 * b_prev - kf / 2.0 * b_cur + self.pmf(k))
    }

    /// `sum_{k >= 1} b'_k`: the finite sum to the cap plus the closed-form tail
    /// `beta'' S_cap / ((cap + 1)(cap + 2))`, where `S_cap = cap + H_cap`.
    pub fn b_prime_total(&self) -> f64 {
        let mut acc: NeumaierSum = self.b_prime_table(self.cap).into_iter().rev().collect();
        let c = self.cap as f64;
        acc.add(self.normalizer * harmonic_weight(self.cap) / ((c + 1.0) * (c + 2.0)));
        acc.value()
    }
}

/// `b'_k(t)` for the exponent-2 horizon truncation.
pub fn b_k_prime(k: u64, t: u64) -> Result<f64> {
    Ok(HorizonLaw::new(t)?.b_prime(k))
}

/// Tabulated limit law, optionally with its finite-horizon counterpart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryTable {
    pub alpha: f64,
    pub t: Option<u64>,
    pub k_max: u64,
    pub b_k: Vec<f64>,
    /// Empty when no horizon was requested.
    pub b_k_prime: Vec<f64>,
    pub residual: Vec<f64>,
    /// `1 - sum_{k <= k_max} b_k`.
    pub tail_remainder: f64,
}

impl TheoryTable {
    pub fn new(k_max: u64, t: Option<u64>) -> Result<Self> {
        if k_max == 0 {
            return domain("k_max must be >= 1");
        }
        let b_k = b_table(k_max);
        let partial: NeumaierSum = b_k.iter().rev().copied().collect();
        let (b_k_prime, residual) = match t {
            None => (Vec::new(), Vec::new()),
            Some(t) => {
                let law = HorizonLaw::new(t)?;
                let bp = law.b_prime_table(k_max);
                let res = (1..=k_max)
                    .map(|k| {
                        let prev = if k == 1 { 0.0 } else { bp[k as usize - 2] };
                        law.recursion_residual(k, prev, bp[k as usize - 1])
                    })
                    .collect();
                (bp, res)
            }
        };
        Ok(Self {
            alpha: 2.0,
            t,
            k_max,
            b_k,
            b_k_prime,
            residual,
            tail_remainder: 1.0 - partial.value(),
        })
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.residual.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}
