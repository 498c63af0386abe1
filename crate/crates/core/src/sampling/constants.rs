use serde::{Deserialize, Serialize};

use super::law::{beta_normalizer, PowerLawSpec};
use super::zeta::{power_sum, zeta_tail};
use crate::error::{domain, Result};

/// Constants governing the heavy-tail regime `1 < alpha < 2`.
///
/// `c = ((alpha - 1) / (8 beta))^(1 / (1 - alpha))`,
/// `C(alpha, t) = beta (2c)^(2 - alpha) / ((2 - alpha) P(X < c t^(1/(alpha-1)) + 1))`,
/// and `C_inf = (2c)^(2 - alpha) beta / (2 - alpha)` is its limit as `t` grows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailConstants {
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub t: u64,
    /// `C(alpha, t)` at the `t` above.
    pub c_of_t: f64,
    pub c_inf: f64,
}

impl TailConstants {
    /// `C(alpha, t)` for any horizon; `t` may exceed `u64`.
    pub fn c_at(&self, t: f64) -> f64 {
        let threshold = self.c * t.powf(1.0 / (self.alpha - 1.0)) + 1.0;
        let below = 1.0 - PowerLawSpec::untruncated(self.alpha)
            .expect("alpha validated")
            .tail_at_least(threshold);
        self.c_inf / below
    }

    /// Smallest horizon admitted by the truncation bounds, `c^(1 - alpha)`.
    pub fn min_horizon(&self) -> f64 {
        self.c.powf(1.0 - self.alpha)
    }
}

pub fn tail_constants(alpha: f64, t: u64) -> Result<TailConstants> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return domain(format!("tail constants need 1 < alpha < 2, got {alpha}"));
    }
    if t == 0 {
        return domain("t must be positive");
    }
    let beta = beta_normalizer(alpha)?;
    let c = ((alpha - 1.0) / (8.0 * beta)).powf(1.0 / (1.0 - alpha));
    let c_inf = (2.0 * c).powf(2.0 - alpha) * beta / (2.0 - alpha);
    let mut out = TailConstants {
        alpha,
        beta,
        c,
        t,
        c_of_t: f64::NAN,
        c_inf,
    };
    out.c_of_t = out.c_at(t as f64);
    Ok(out)
}

/// Largest integer strictly below `threshold`.
fn strictly_below(threshold: f64) -> Result<u64> {
    if !(threshold.is_finite() && threshold < u64::MAX as f64) {
        return domain(format!("truncation threshold {threshold:e} exceeds the u64 range"));
    }
    let floor = threshold.floor();
    let cap = if floor == threshold { floor - 1.0 } else { floor };
    Ok(cap as u64)
}

/// Real threshold `M` such that the truncated law keeps `{i : i < M}`.
///
/// `alpha = 2`: `M = t ln ln t + 1`; `1 < alpha < 2`: `M = c t^(1/(alpha-1)) + 1`.
pub fn truncation_threshold(alpha: f64, t: u64) -> Result<f64> {
    if alpha == 2.0 {
        if t < 3 {
            return domain(format!("alpha = 2 truncation needs t >= 3, got {t}"));
        }
        let t = t as f64;
        Ok(t * t.ln().ln() + 1.0)
    } else if alpha > 1.0 && alpha < 2.0 {
        let k = tail_constants(alpha, t)?;
        if (t as f64) < k.min_horizon() {
            return domain(format!(
                "t = {t} is below c^(1 - alpha) = {}",
                k.min_horizon()
            ));
        }
        Ok(k.c * (t as f64).powf(1.0 / (alpha - 1.0)) + 1.0)
    } else {
        domain(format!("no truncation scheme for alpha = {alpha}"))
    }
}

/// Inclusive cap of the horizon-dependent truncation.
pub fn truncation_point(alpha: f64, t: u64) -> Result<u64> {
    strictly_below(truncation_threshold(alpha, t)?)
}

/// `(E[X], E[X^2])` for a law with finite second moment.
pub fn truncated_moments(spec: &PowerLawSpec) -> Result<(f64, f64)> {
    let a = spec.alpha();
    let b = spec.normalizer();
    match spec.cap() {
        Some(cap) => Ok((b * power_sum(a - 1.0, cap), b * power_sum(a - 2.0, cap))),
        None if a > 3.0 => Ok((b * zeta_tail(a - 1.0, 1)?, b * zeta_tail(a - 2.0, 1)?)),
        None => domain(format!("second moment is infinite for untruncated alpha = {a}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_alpha_three_halves() {
        let k = tail_constants(1.5, 100).unwrap();
        // beta(1.5) = 0.3827932..., c = (0.5 / (8 beta))^-2
        let expected_c = (0.5 / (8.0 * k.beta)).powi(-2);
        assert!((k.c - expected_c).abs() < 1e-12);
        assert!((k.c - 37.51).abs() < 0.01, "{}", k.c);
        assert!((k.c_inf - 6.632).abs() < 0.001, "{}", k.c_inf);
        assert!(k.c_of_t >= k.c_inf);
    }

    #[test]
    fn constants_reject_outside_open_interval() {
        assert!(tail_constants(2.0, 10).is_err());
        assert!(tail_constants(1.0, 10).is_err());
        assert!(tail_constants(2.5, 10).is_err());
    }

    #[test]
    fn big_c_decreases_to_limit() {
        for &alpha in &[1.2, 1.5, 1.8, 1.9] {
            let k = tail_constants(alpha, 1).unwrap();
            let mut prev = f64::INFINITY;
            for t in [1.0, 2.0, 10.0, 100.0, 1e3, 1e4, 1e6] {
                let v = k.c_at(t);
                assert!(v <= prev && v >= k.c_inf, "alpha={alpha} t={t}");
                prev = v;
            }
        }
    }

    #[test]
    fn truncation_alpha_two() {
        // 1e4 ln ln 1e4 = 22203.268..., so the threshold is 22204.268...
        assert_eq!(truncation_point(2.0, 10_000).unwrap(), 22_204);
        assert!(truncation_point(2.0, 2).is_err());
        assert!(truncation_point(2.0, 3).unwrap() >= 1);
    }

    #[test]
    fn truncation_alpha_three_halves() {
        let k = tail_constants(1.5, 100).unwrap();
        let cap = truncation_point(1.5, 100).unwrap();
        let m = k.c * 1e4 + 1.0;
        assert!((cap as f64) < m && (cap + 1) as f64 >= m);
        assert_eq!(cap, 375_119);
    }

    #[test]
    fn truncation_overflow_is_an_error() {
        assert!(truncation_point(1.2, 10_000).is_err());
        assert!(truncation_point(3.0, 100).is_err());
    }

    #[test]
    fn moments_of_degenerate_and_horizon_laws() {
        let one = PowerLawSpec::truncated(2.0, 1).unwrap();
        assert_eq!(truncated_moments(&one).unwrap(), (1.0, 1.0));

        let cap = truncation_point(2.0, 10_000).unwrap();
        let z = PowerLawSpec::truncated(2.0, cap).unwrap();
        let (mean, second) = truncated_moments(&z).unwrap();
        let ratio = mean / (z.normalizer() * (1e4_f64).ln());
        assert!(ratio > 0.9 && ratio < 1.2, "{ratio}");
        assert!((second - z.normalizer() * cap as f64).abs() < 1e-9 * second);

        assert!(truncated_moments(&PowerLawSpec::untruncated(2.0).unwrap()).is_err());
    }
}
