use serde::{Deserialize, Serialize};

/// Degree counts at a checkpoint: `R_k(t)` for `1 <= k <= k_max` plus an
/// overflow bucket for larger degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence {
    pub t: u64,
    pub k_max: u64,
    /// `counts[k - 1] = R_k(t)`.
    pub counts: Vec<u64>,
    /// Vertices of degree above `k_max`.
    pub overflow: u64,
    /// Sum of all vertex degrees, `2 Λ(t)`.
    pub total_degree: u128,
}

impl DegreeSequence {
    pub fn from_degrees(t: u64, degrees: &[u64], k_max: u64) -> Self {
        let mut counts = vec![0_u64; k_max as usize];
        let mut overflow = 0;
        let mut total_degree = 0_u128;
        for &d in degrees {
            total_degree += d as u128;
            match d {
                0 => unreachable!("every vertex carries at least one edge"),
                d if d <= k_max => counts[d as usize - 1] += 1,
                _ => overflow += 1,
            }
        }
        Self {
            t,
            k_max,
            counts,
            overflow,
            total_degree,
        }
    }

    /// `t + 1`.
    pub fn vertices(&self) -> u64 {
        self.t + 1
    }

    /// `R_k(t)`; degrees above `k_max` are only available in aggregate.
    pub fn count(&self, k: u64) -> u64 {
        if k == 0 || k > self.k_max {
            0
        } else {
            self.counts[k as usize - 1]
        }
    }

    /// `r_k(t) = R_k(t) / (t + 1)`.
    pub fn proportion(&self, k: u64) -> f64 {
        self.count(k) as f64 / self.vertices() as f64
    }

    pub fn overflow_proportion(&self) -> f64 {
        self.overflow as f64 / self.vertices() as f64
    }

    /// `Q_k(t)`, the number of vertices of degree at most `k` (`k <= k_max`).
    pub fn cumulative(&self, k: u64) -> u64 {
        self.counts[..k.min(self.k_max) as usize].iter().sum()
    }

    /// `(k, R_k, r_k, Q_k)` for `k = 1..=k_max`.
    pub fn rows(&self) -> impl Iterator<Item = (u64, u64, f64, u64)> + '_ {
        let n = self.vertices() as f64;
        self.counts
            .iter()
            .enumerate()
            .scan(0_u64, move |q, (i, &r)| {
                *q += r;
                Some((i as u64 + 1, r, r as f64 / n, *q))
            })
    }

    /// `(R_1, ..., R_kmax, overflow)`.
    pub fn count_vector(&self) -> Vec<u64> {
        let mut v = self.counts.clone();
        v.push(self.overflow);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_vertices_of_degree_three() {
        let s = DegreeSequence::from_degrees(1, &[3, 3], 10);
        assert_eq!(s.count(3), 2);
        assert_eq!(s.cumulative(2), 0);
        assert_eq!(s.cumulative(3), 2);
        assert_eq!(s.proportion(3), 1.0);
        assert_eq!(s.total_degree, 6);
    }

    #[test]
    fn mixed_degrees() {
        let s = DegreeSequence::from_degrees(3, &[2, 2, 1, 1], 5);
        assert_eq!(s.proportion(1), 0.5);
        assert_eq!(s.proportion(2), 0.5);
        assert_eq!(s.cumulative(1), 2);
        assert_eq!(s.cumulative(2), 4);
    }

    #[test]
    fn overflow_partitions_vertices() {
        let s = DegreeSequence::from_degrees(4, &[9, 1, 4, 2, 7], 3);
        assert_eq!(s.overflow, 3);
        assert_eq!(s.cumulative(s.k_max) + s.overflow, s.vertices());
        let rows: Vec<_> = s.rows().collect();
        assert_eq!(rows.last().unwrap().3, 2);
    }
}
