use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::sampling::{
    tail_constants, truncation_point, InitialDegreeLaw, PowerLawSpec,
};

/// Default ceiling on the expected number of edge endpoints of a single run.
pub const DEFAULT_ENDPOINT_LIMIT: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", content = "cap", rename_all = "snake_case")]
pub enum Truncation {
    None,
    /// Cap below `c t^(1/(alpha-1)) + 1`, for `1 < alpha < 2`.
    HorizonAlphaLt2,
    /// Cap below `t ln ln t + 1`, for `alpha = 2`.
    HorizonAlphaEq2,
    Explicit(u64),
}

impl Truncation {
    /// The horizon-dependent scheme matching `alpha`, or `None` outside `(1, 2]`.
    pub fn horizon_for(alpha: f64) -> Self {
        if alpha == 2.0 {
            Self::HorizonAlphaEq2
        } else if alpha > 1.0 && alpha < 2.0 {
            Self::HorizonAlphaLt2
        } else {
            Self::None
        }
    }
}

/// Law of the number of edges brought by each new vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialLaw {
    PowerLaw { alpha: f64, truncation: Truncation },
    /// `pmf[i - 1] = P(X = i)`.
    Finite { pmf: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParidConfig {
    pub law: InitialLaw,
    pub delta: f64,
    /// Final step `t`; the graph then has `t + 1` vertices.
    pub steps: u64,
    pub seed: u64,
    /// Steps after which a degree snapshot is taken, sorted and deduplicated.
    pub checkpoints: Vec<u64>,
    pub k_max: u64,
    /// `None` disables the resource guard.
    pub endpoint_limit: Option<f64>,
}

impl ParidConfig {
    pub fn power_law(alpha: f64, truncation: Truncation, steps: u64) -> Self {
        Self::new(InitialLaw::PowerLaw { alpha, truncation }, steps)
    }

    pub fn finite(pmf: Vec<f64>, steps: u64) -> Self {
        Self::new(InitialLaw::Finite { pmf }, steps)
    }

    pub fn new(law: InitialLaw, steps: u64) -> Self {
        Self {
            law,
            delta: 0.0,
            steps,
            seed: 0,
            checkpoints: Vec::new(),
            k_max: 1000,
            endpoint_limit: Some(DEFAULT_ENDPOINT_LIMIT),
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_k_max(mut self, k_max: u64) -> Self {
        self.k_max = k_max;
        self
    }

    pub fn with_checkpoints(mut self, mut checkpoints: Vec<u64>) -> Self {
        checkpoints.sort_unstable();
        checkpoints.dedup();
        self.checkpoints = checkpoints;
        self
    }

    pub fn with_endpoint_limit(mut self, limit: Option<f64>) -> Self {
        self.endpoint_limit = limit;
        self
    }

    pub fn alpha(&self) -> Option<f64> {
        match self.law {
            InitialLaw::PowerLaw { alpha, .. } => Some(alpha),
            InitialLaw::Finite { .. } => None,
        }
    }

    /// Inclusive support cap after resolving the truncation against `steps`.
    pub fn resolved_cap(&self) -> Result<Option<u64>> {
        match &self.law {
            InitialLaw::Finite { pmf } => Ok(Some(pmf.len() as u64)),
            InitialLaw::PowerLaw { alpha, truncation } => match *truncation {
                Truncation::None => Ok(None),
                Truncation::Explicit(cap) => Ok(Some(cap)),
                Truncation::HorizonAlphaEq2 if *alpha != 2.0 => {
                    domain(format!("alpha = 2 truncation requested with alpha = {alpha}"))
                }
                Truncation::HorizonAlphaLt2 if !(*alpha > 1.0 && *alpha < 2.0) => domain(format!(
                    "1 < alpha < 2 truncation requested with alpha = {alpha}"
                )),
                Truncation::HorizonAlphaEq2 | Truncation::HorizonAlphaLt2 => {
                    truncation_point(*alpha, self.steps).map(Some)
                }
            },
        }
    }

    /// Builds the sampler for the initial-degree law.
    pub fn build_law(&self) -> Result<InitialDegreeLaw> {
        match &self.law {
            InitialLaw::Finite { pmf } => InitialDegreeLaw::finite(pmf.clone()),
            InitialLaw::PowerLaw { alpha, .. } => {
                let spec = match self.resolved_cap()? {
                    Some(cap) => PowerLawSpec::truncated(*alpha, cap)?,
                    None => PowerLawSpec::untruncated(*alpha)?,
                };
                Ok(InitialDegreeLaw::power_law(spec))
            }
        }
    }

    /// Checks the static constraints that do not need the sampler.
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return domain("steps must be >= 1");
        }
        if self.k_max == 0 {
            return domain("k_max must be >= 1");
        }
        if !self.delta.is_finite() {
            return domain("delta must be finite");
        }
        if let InitialLaw::PowerLaw { alpha, .. } = self.law {
            if !(alpha > 1.0) || !alpha.is_finite() {
                return domain(format!("alpha must exceed 1, got {alpha}"));
            }
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return domain("checkpoints must be strictly increasing");
        }
        if let (Some(&first), Some(&last)) = (self.checkpoints.first(), self.checkpoints.last()) {
            if first == 0 || last > self.steps {
                return domain(format!("checkpoints must lie in [1, {}]", self.steps));
            }
        }
        Ok(())
    }

    /// Validates the configuration against a built law, including the
    /// attachment-weight constraint and the resource guard.
    pub fn validate_with(&self, law: &InitialDegreeLaw) -> Result<()> {
        self.validate()?;
        let min = law.min_support() as f64;
        if !(self.delta + min > 0.0) {
            return domain(format!(
                "delta + minimum initial degree must be positive (delta = {}, min = {min})",
                self.delta
            ));
        }
        if let Some(limit) = self.endpoint_limit {
            let estimate = self.expected_endpoints(law)?;
            if estimate > limit {
                return Err(Error::ResourceGuard(format!(
                    "expected edge endpoints {estimate:.3e} exceed the limit {limit:.3e}"
                )));
            }
        }
        Ok(())
    }

    /// Desk estimate of the edge endpoints of a run, used by the resource guard.
    pub fn expected_endpoints(&self, law: &InitialDegreeLaw) -> Result<f64> {
        let t = self.steps as f64;
        if let Some(mean) = law.mean() {
            return Ok(2.0 * t * mean);
        }
        let alpha = self.alpha().expect("finite laws have a mean");
        if alpha < 2.0 {
            let k = tail_constants(alpha, self.steps)?;
            Ok(k.c_inf * t.powf(1.0 / (alpha - 1.0)))
        } else {
            // Typical size of a sum of t untruncated alpha = 2 draws.
            let beta = crate::sampling::beta_normalizer(alpha)?;
            Ok(2.0 * t * beta * t.max(2.0).ln())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_constraint() {
        let cfg = ParidConfig::finite(vec![1.0], 3).with_delta(-1.0);
        let law = cfg.build_law().unwrap();
        assert!(cfg.validate_with(&law).is_err());
        let cfg = cfg.with_delta(-0.5);
        assert!(cfg.validate_with(&law).is_ok());
        let cfg = ParidConfig::finite(vec![0.0, 1.0], 3).with_delta(-1.5);
        let law = cfg.build_law().unwrap();
        assert!(cfg.validate_with(&law).is_ok());
    }

    #[test]
    fn checkpoints_in_range() {
        let cfg = ParidConfig::finite(vec![1.0], 3).with_checkpoints(vec![3, 1, 3]);
        assert_eq!(cfg.checkpoints, vec![1, 3]);
        assert!(cfg.validate().is_ok());
        assert!(ParidConfig::finite(vec![1.0], 3).with_checkpoints(vec![4]).validate().is_err());
        assert!(ParidConfig::finite(vec![1.0], 3).with_checkpoints(vec![0]).validate().is_err());
    }

    #[test]
    fn horizon_truncations_resolve() {
        let cfg = ParidConfig::power_law(2.0, Truncation::HorizonAlphaEq2, 10_000);
        assert_eq!(cfg.resolved_cap().unwrap(), Some(22_204));
        let cfg = ParidConfig::power_law(1.5, Truncation::HorizonAlphaEq2, 10_000);
        assert!(cfg.resolved_cap().is_err());
        assert_eq!(Truncation::horizon_for(1.5), Truncation::HorizonAlphaLt2);
        assert_eq!(Truncation::horizon_for(2.5), Truncation::None);
    }

    #[test]
    fn resource_guard_scale() {
        let ok = ParidConfig::power_law(1.5, Truncation::None, 2000);
        let law = ok.build_law().unwrap();
        let est = ok.expected_endpoints(&law).unwrap();
        assert!(est > 2e7 && est < 3e7, "{est}");
        assert!(ok.validate_with(&law).is_ok());

        let big = ParidConfig::power_law(1.5, Truncation::None, 10_000);
        assert!(matches!(big.validate_with(&law), Err(Error::ResourceGuard(_))));
        assert!(big.with_endpoint_limit(None).validate_with(&law).is_ok());
    }

    #[test]
    fn alpha_at_most_one_rejected() {
        assert!(ParidConfig::power_law(0.9, Truncation::None, 10).validate().is_err());
    }
}
