use serde::{Deserialize, Serialize};

use super::zeta::{power_sum, zeta_tail, zeta_tail_from, NeumaierSum, SWITCH};
use crate::error::{domain, Result};

/// Largest support value held in a dense inverse-CDF table.
pub const DENSE_TABLE_LIMIT: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawKind {
    Untruncated,
    Truncated,
}

/// Discrete power law `P(X = i) = normalizer * i^(-alpha)` on `1..=cap`
/// (or all positive integers when untruncated).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawSpec {
    alpha: f64,
    normalizer: f64,
    cap: Option<u64>,
}

/// `1 / zeta(alpha)`.
pub fn beta_normalizer(alpha: f64) -> Result<f64> {
    Ok(1.0 / zeta_tail(alpha, 1)?)
}

impl PowerLawSpec {
    pub fn untruncated(alpha: f64) -> Result<Self> {
        Ok(Self {
            alpha,
            normalizer: beta_normalizer(alpha)?,
            cap: None,
        })
    }

    /// The law conditioned on `X <= cap`.
    pub fn truncated(alpha: f64, cap: u64) -> Result<Self> {
        if cap == 0 {
            return domain("truncation cap must be >= 1");
        }
        let beta = beta_normalizer(alpha)?;
        let below = untruncated_cdf(alpha, beta, cap)?;
        Ok(Self {
            alpha,
            normalizer: beta / below,
            cap: Some(cap),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn cap(&self) -> Option<u64> {
        self.cap
    }

    pub fn kind(&self) -> LawKind {
        match self.cap {
            Some(_) => LawKind::Truncated,
            None => LawKind::Untruncated,
        }
    }

    pub fn pmf(&self, i: u64) -> f64 {
        if i == 0 || self.cap.is_some_and(|c| i > c) {
            return 0.0;
        }
        self.normalizer * (i as f64).powf(-self.alpha)
    }

    /// `P(X > k)`.
    pub fn survival(&self, k: u64) -> f64 {
        match self.cap {
            Some(c) if k >= c => 0.0,
            Some(c) => {
                let from = zeta_tail_from(self.alpha, k as f64 + 1.0).expect("alpha validated");
                let beyond = zeta_tail_from(self.alpha, c as f64 + 1.0).expect("alpha validated");
                (self.normalizer * (from - beyond)).max(0.0)
            }
            None if k == 0 => 1.0,
            None => {
                self.normalizer * zeta_tail_from(self.alpha, k as f64 + 1.0).expect("alpha validated")
            }
        }
    }

    /// `P(X <= k)`.
    pub fn cdf(&self, k: u64) -> f64 {
        if self.cap.is_some_and(|c| k >= c) {
            return 1.0;
        }
        if k < SWITCH {
            self.normalizer * power_sum(self.alpha, k)
        } else {
            1.0 - self.survival(k)
        }
    }

    /// `P(X >= y)` for a real threshold `y`.
    pub fn tail_at_least(&self, y: f64) -> f64 {
        if y <= 1.0 {
            return 1.0;
        }
        let first = y.ceil();
        match self.cap {
            Some(c) if first > c as f64 => 0.0,
            Some(_) => self.survival(first as u64 - 1),
            None => self.normalizer * zeta_tail_from(self.alpha, first).expect("alpha validated"),
        }
    }

    /// `sum_i pmf(i)`, evaluated as a finite sum (truncated) or a partial sum
    /// plus the zeta remainder (untruncated).
    pub fn total_mass(&self) -> f64 {
        match self.cap {
            Some(c) => self.normalizer * power_sum(self.alpha, c),
            None => {
                let head = power_sum(self.alpha, SWITCH - 1);
                let tail = zeta_tail(self.alpha, SWITCH).expect("alpha validated");
                self.normalizer * (head + tail)
            }
        }
    }
}

fn untruncated_cdf(alpha: f64, beta: f64, k: u64) -> Result<f64> {
    if k < SWITCH {
        Ok(beta * power_sum(alpha, k))
    } else {
        Ok(1.0 - beta * zeta_tail(alpha, k + 1)?)
    }
}

/// Cumulative table over `1..=len` with a guide array for O(1) expected lookup.
#[derive(Clone, Debug)]
pub struct CdfTable {
    cdf: Vec<f64>,
    guide: Vec<u32>,
}

impl CdfTable {
    pub(crate) fn new(cdf: Vec<f64>) -> Self {
        assert!(!cdf.is_empty());
        let buckets = cdf.len().clamp(1, 1 << 16);
        let guide = (0..=buckets)
            .map(|j| {
                let level = j as f64 / buckets as f64;
                cdf.partition_point(|&c| c < level) as u32
            })
            .collect();
        Self { cdf, guide }
    }

    pub(crate) fn len(&self) -> usize {
        self.cdf.len()
    }

    /// Smallest support value `k` with `cdf(k) >= u`, or `None` past the table.
    #[inline]
    pub(crate) fn search(&self, u: f64) -> Option<u64> {
        let buckets = self.guide.len() - 1;
        let j = ((u * buckets as f64) as usize).min(buckets - 1);
        let lo = self.guide[j] as usize;
        let hi = (self.guide[j + 1] as usize + 1).min(self.cdf.len());
        if lo >= hi {
            return None;
        }
        let idx = lo + self.cdf[lo..hi].partition_point(|&c| c < u);
        (idx < self.cdf.len()).then_some(idx as u64 + 1)
    }
}

/// Inverse-CDF sampler for a [`PowerLawSpec`].
///
/// A dense table covers `1..=min(cap, 2^20)`; draws landing beyond it are
/// resolved by bisection on the exact survival function.
#[derive(Clone, Debug)]
pub struct PowerLawSampler {
    spec: PowerLawSpec,
    table: CdfTable,
}

impl PowerLawSampler {
    pub fn new(spec: PowerLawSpec) -> Self {
        let len = spec.cap.unwrap_or(u64::MAX).min(DENSE_TABLE_LIMIT);
        let mut acc = NeumaierSum::new();
        let mut cdf: Vec<f64> = (1..=len)
            .map(|i| {
                acc.add(spec.pmf(i));
                acc.value()
            })
            .collect();
        if spec.cap == Some(len) {
            *cdf.last_mut().expect("len >= 1") = 1.0;
        }
        Self {
            spec,
            table: CdfTable::new(cdf),
        }
    }

    pub fn spec(&self) -> &PowerLawSpec {
        &self.spec
    }

    /// Smallest `k` with `CDF(k) >= u`, for `u` in `[0, 1)`.
    ///
    /// Untruncated draws whose value does not fit in 63 bits saturate to `u64::MAX`.
    #[inline]
    pub fn sample(&self, u: f64) -> u64 {
        match self.table.search(u) {
            Some(k) => k,
            None => self.sample_tail(u),
        }
    }

    #[cold]
    fn sample_tail(&self, u: f64) -> u64 {
        let target = 1.0 - u;
        let mut lo = self.table.len() as u64;
        let mut hi = match self.spec.cap {
            Some(c) => c,
            None => {
                let mut hi = lo.saturating_mul(2);
                while self.spec.survival(hi) > target {
                    if hi >= 1 << 62 {
                        return u64::MAX;
                    }
                    lo = hi;
                    hi *= 2;
                }
                hi
            }
        };
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.spec.survival(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

/// Distribution of the number of edges each new vertex brings.
#[derive(Clone, Debug)]
pub enum InitialDegreeLaw {
    PowerLaw(PowerLawSampler),
    /// Finite pmf over `1..=pmf.len()`.
    Finite { pmf: Vec<f64>, table: CdfTable },
}

impl InitialDegreeLaw {
    pub fn power_law(spec: PowerLawSpec) -> Self {
        Self::PowerLaw(PowerLawSampler::new(spec))
    }

    /// `pmf[i - 1] = P(X = i)`; must be nonnegative and sum to 1 within 1e-9.
    pub fn finite(pmf: Vec<f64>) -> Result<Self> {
        if pmf.is_empty() {
            return domain("pmf must have at least one entry");
        }
        if pmf.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return domain("pmf entries must be finite and nonnegative");
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return domain(format!("pmf sums to {total}, expected 1 within 1e-9"));
        }
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = pmf
            .iter()
            .map(|p| {
                acc += p;
                acc / total
            })
            .collect();
        // Mass-free trailing support must never be drawn.
        let last_positive = pmf.iter().rposition(|&p| p > 0.0).expect("sums to 1");
        for c in &mut cdf[last_positive..] {
            *c = 1.0;
        }
        Ok(Self::Finite {
            pmf,
            table: CdfTable::new(cdf),
        })
    }

    #[inline]
    pub fn sample(&self, u: f64) -> u64 {
        match self {
            Self::PowerLaw(s) => s.sample(u),
            Self::Finite { table, .. } => table
                .search(u)
                .unwrap_or(table.len() as u64)
                .max(self.min_support()),
        }
    }

    pub fn pmf(&self, i: u64) -> f64 {
        match self {
            Self::PowerLaw(s) => s.spec.pmf(i),
            Self::Finite { pmf, .. } => {
                if i == 0 {
                    0.0
                } else {
                    pmf.get(i as usize - 1).copied().unwrap_or(0.0)
                }
            }
        }
    }

    pub fn min_support(&self) -> u64 {
        match self {
            Self::PowerLaw(_) => 1,
            Self::Finite { pmf, .. } => pmf.iter().position(|&p| p > 0.0).expect("sums to 1") as u64 + 1,
        }
    }

    /// Largest support value, `None` when unbounded.
    pub fn max_support(&self) -> Option<u64> {
        match self {
            Self::PowerLaw(s) => s.spec.cap,
            Self::Finite { pmf, .. } => Some(pmf.iter().rposition(|&p| p > 0.0).expect("sums to 1") as u64 + 1),
        }
    }

    /// `E[X]`, `None` when infinite.
    pub fn mean(&self) -> Option<f64> {
        match self {
            Self::PowerLaw(s) => match s.spec.cap {
                Some(c) => Some(s.spec.normalizer * power_sum(s.spec.alpha - 1.0, c)),
                None if s.spec.alpha > 2.0 => {
                    Some(s.spec.normalizer * zeta_tail(s.spec.alpha - 1.0, 1).ok()?)
                }
                None => None,
            },
            Self::Finite { pmf, .. } => Some(
                pmf.iter()
                    .enumerate()
                    .map(|(i, p)| (i + 1) as f64 * p)
                    .sum(),
            ),
        }
    }
}
