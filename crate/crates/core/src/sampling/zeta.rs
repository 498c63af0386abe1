//! Tail sums of `i^(-s)` for the discrete power laws.
//!
//! Everything here follows the same recipe: sum the first terms explicitly,
//! then hand the remainder to an Euler–Maclaurin expansion started at an index
//! large enough that four Bernoulli corrections leave an error far below
//! double precision.

use crate::error::{domain, Result};

/// Index from which the Euler–Maclaurin remainder takes over.
pub const SWITCH: u64 = 10_000;

/// `B_{2j} / (2j)!` for `j = 1..=4`.
const BERNOULLI_OVER_FACTORIAL: [f64; 4] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
];

/// Compensated (Neumaier) running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Rising factorial `s (s+1) ... (s+m-1)`.
fn pochhammer(s: f64, m: u32) -> f64 {
    (0..m).map(|i| s + i as f64).product()
}

/// `sum_{j=1..4} B_{2j}/(2j)! (s)_{2j-1} x^(-s-2j+1)`.
fn bernoulli_corrections(s: f64, x: f64) -> f64 {
    BERNOULLI_OVER_FACTORIAL
        .iter()
        .enumerate()
        .map(|(j, b)| {
            let order = 2 * (j as u32 + 1) - 1;
            b * pochhammer(s, order) * x.powf(-s - order as f64)
        })
        .sum()
}

/// Euler–Maclaurin value of `sum_{i >= 0} (start + i)^(-s)`, valid for large `start`.
fn euler_maclaurin_tail(s: f64, start: f64) -> f64 {
    start.powf(1.0 - s) / (s - 1.0) + 0.5 * start.powf(-s) + bernoulli_corrections(s, start)
}

/// `sum_{i=first}^{last} i^(-s)` summed from the small terms upwards.
fn explicit_sum(s: f64, first: u64, last: u64) -> f64 {
    (first..=last)
        .rev()
        .map(|i| (i as f64).powf(-s))
        .collect::<NeumaierSum>()
        .value()
}

/// `sum_{i >= k} i^(-alpha)`, the tail of the Riemann zeta series.
pub fn zeta_tail(alpha: f64, k: u64) -> Result<f64> {
    if k == 0 {
        return domain("zeta_tail requires k >= 1");
    }
    zeta_tail_from(alpha, k as f64)
}

/// Hurwitz zeta `sum_{i >= 0} (start + i)^(-alpha)` for real `start >= 1`.
///
/// For integral `start` this is the zeta tail from `start`; it stays usable
/// when the starting index no longer fits in a `u64`.
pub fn zeta_tail_from(alpha: f64, start: f64) -> Result<f64> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return domain(format!("zeta series diverges for alpha = {alpha}"));
    }
    if !(start >= 1.0) || !start.is_finite() {
        return domain(format!("zeta tail start must be finite and >= 1, got {start}"));
    }
    if start >= SWITCH as f64 {
        return Ok(euler_maclaurin_tail(alpha, start));
    }
    let whole = start.fract() == 0.0;
    let mut acc = NeumaierSum::new();
    if whole {
        acc.add(explicit_sum(alpha, start as u64, SWITCH - 1));
        acc.add(euler_maclaurin_tail(alpha, SWITCH as f64));
    } else {
        let n = (SWITCH as f64 - start).ceil() as u64;
        for i in (0..n).rev() {
            acc.add((start + i as f64).powf(-alpha));
        }
        acc.add(euler_maclaurin_tail(alpha, start + n as f64));
    }
    Ok(acc.value())
}

/// Generalized harmonic number `sum_{i=1}^{n} i^(-s)` for any real `s`.
pub fn power_sum(s: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if n < 2 * SWITCH {
        return explicit_sum(s, 1, n);
    }
    let head = explicit_sum(s, 1, SWITCH - 1);
    let (lo, hi) = (SWITCH as f64, n as f64);
    let integral = if s == 1.0 {
        (hi / lo).ln()
    } else {
        (hi.powf(1.0 - s) - lo.powf(1.0 - s)) / (1.0 - s)
    };
    let ends = 0.5 * (lo.powf(-s) + hi.powf(-s));
    let corrections = bernoulli_corrections(s, lo) - bernoulli_corrections(s, hi);
    let mut acc = NeumaierSum::new();
    acc.add(head);
    acc.add(integral);
    acc.add(ends);
    acc.add(corrections);
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let z = zeta_tail(2.0, 1).unwrap();
        assert!(rel(z, PI * PI / 6.0) < 1e-14, "{z}");
    }

    #[test]
    fn zeta_four_is_pi_fourth_over_ninety() {
        let z = zeta_tail(4.0, 1).unwrap();
        assert!(rel(z, PI.powi(4) / 90.0) < 1e-14, "{z}");
    }

    #[test]
    fn zeta_three_halves() {
        // Reference value of zeta(3/2).
        let z = zeta_tail(1.5, 1).unwrap();
        assert!(rel(z, 2.612_375_348_685_488) < 1e-13, "{z}");
    }

    #[test]
    fn telescoping_difference_is_single_term() {
        for &alpha in &[1.2, 1.5, 2.0, 3.3] {
            for &k in &[1_u64, 7, 9_999, 10_000, 10_001, 123_456] {
                let diff = zeta_tail(alpha, k).unwrap() - zeta_tail(alpha, k + 1).unwrap();
                let term = (k as f64).powf(-alpha);
                assert!(
                    rel(diff, term) < 1e-6 || (diff - term).abs() < 1e-15,
                    "alpha={alpha} k={k} diff={diff} term={term}"
                );
            }
        }
    }

    #[test]
    fn em_agrees_with_brute_force_across_switch() {
        // Brute force: explicit sum over [k, 2e6] plus the first-order integral remainder.
        let alpha = 1.7;
        let k = 9_000_u64;
        let upper = 2_000_000_u64;
        let brute = explicit_sum(alpha, k, upper - 1)
            + (upper as f64).powf(1.0 - alpha) / (alpha - 1.0)
            + 0.5 * (upper as f64).powf(-alpha)
            + alpha / 12.0 * (upper as f64).powf(-alpha - 1.0);
        let z = zeta_tail(alpha, k).unwrap();
        assert!(rel(z, brute) < 1e-12, "{z} vs {brute}");
    }

    #[test]
    fn real_start_matches_integral_start() {
        let a = zeta_tail_from(1.5, 37.0).unwrap();
        let b = zeta_tail(1.5, 37).unwrap();
        assert!(rel(a, b) < 1e-15);
        // Hurwitz identity zeta(s, q) = q^-s + zeta(s, q + 1).
        let q = 12.25;
        let lhs = zeta_tail_from(1.8, q).unwrap();
        let rhs = q.powf(-1.8) + zeta_tail_from(1.8, q + 1.0).unwrap();
        assert!(rel(lhs, rhs) < 1e-13);
    }

    #[test]
    fn huge_start_uses_asymptotics() {
        let z = zeta_tail_from(1.2, 1e24).unwrap();
        let leading = 1e24_f64.powf(-0.2) / 0.2;
        assert!(rel(z, leading) < 1e-12);
    }

    #[test]
    fn divergent_exponents_rejected() {
        assert!(zeta_tail(1.0, 1).is_err());
        assert!(zeta_tail(0.5, 3).is_err());
        assert!(zeta_tail(2.0, 0).is_err());
    }

    #[test]
    fn power_sum_special_cases() {
        assert_eq!(power_sum(0.0, 22_205), 22_205.0);
        assert_eq!(power_sum(0.0, 3_000_000), 3_000_000.0);
        let h = power_sum(1.0, 1_000_000);
        let euler_gamma = 0.577_215_664_901_532_9;
        let approx = (1e6_f64).ln() + euler_gamma + 0.5e-6 - 1.0 / 12.0 * 1e-12;
        assert!(rel(h, approx) < 1e-14, "{h} {approx}");
        let explicit = explicit_sum(0.5, 1, 50_000);
        assert!(rel(power_sum(0.5, 50_000), explicit) < 1e-13);
    }
}
