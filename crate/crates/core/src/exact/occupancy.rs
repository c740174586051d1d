use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{ln_choose, neumaier_sum};

/// Law of the number of distinct indices among `t` uniform draws from `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyDistribution {
    pub dimension: usize,
    pub draws: u64,
    /// `probabilities[r]` for `r = 0..=N`.
    pub probabilities: Vec<f64>,
}

impl OccupancyDistribution {
    /// Zero draws: no index collected.
    pub fn initial(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        let mut probabilities = vec![0.0; dimension + 1];
        probabilities[0] = 1.0;
        Ok(Self {
            dimension,
            draws: 0,
            probabilities,
        })
    }

    /// One more draw: the count moves from `r` to `r + 1` with probability `(N - r)/N`.
    pub fn advance(&mut self) {
        let n = self.dimension as f64;
        let p = &mut self.probabilities;
        for r in (1..=self.dimension).rev() {
            p[r] = p[r] * (r as f64 / n) + p[r - 1] * ((self.dimension - r + 1) as f64 / n);
        }
        p[0] = 0.0;
        self.draws += 1;
    }

    /// Probability that every index has been drawn.
    pub fn complete(&self) -> f64 {
        self.probabilities[self.dimension]
    }
}

/// Occupancy law after `t` draws, by forward recursion on the count.
///
/// All terms are nonnegative, so unlike the alternating closed form this is
/// stable for any `N`; cost is `O(N t)`.
pub fn occupancy_pmf(n: usize, t: u64) -> Result<OccupancyDistribution> {
    let mut d = OccupancyDistribution::initial(n)?;
    for _ in 0..t {
        d.advance();
    }
    Ok(d)
}

/// Occupancy law by inclusion–exclusion,
/// `p_r = C(N,r) Σ_j (-1)^j C(r,j) ((r-j)/N)^t`, with terms formed in the log
/// domain and summed with Neumaier compensation.
pub fn occupancy_pmf_inclusion_exclusion(n: usize, t: u64) -> Result<OccupancyDistribution> {
    if n == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let nf = n as f64;
    let probabilities = (0..=n)
        .map(|r| {
            if t == 0 {
                return if r == 0 { 1.0 } else { 0.0 };
            }
            if r as u64 > t {
                return 0.0;
            }
            let terms = (0..r).map(|j| {
                let ln_mag = ln_choose(n as u64, r as u64)
                    + ln_choose(r as u64, j as u64)
                    + t as f64 * ((r - j) as f64 / nf).ln();
                let mag = ln_mag.exp();
                if j % 2 == 0 {
                    mag
                } else {
                    -mag
                }
            });
            neumaier_sum(terms)
        })
        .collect();
    Ok(OccupancyDistribution {
        dimension: n,
        draws: t,
        probabilities,
    })
}

/// `P(t_N^- <= t)`: probability that all `N` indices appear among `t` draws.
pub fn coupling_time_cdf(n: usize, t: u64) -> Result<f64> {
    Ok(occupancy_pmf(n, t)?.complete())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_draw_counts() {
        assert_eq!(occupancy_pmf(5, 0).unwrap().probabilities[0], 1.0);
        assert_eq!(occupancy_pmf(5, 1).unwrap().probabilities[1], 1.0);
        let two = occupancy_pmf(2, 2).unwrap();
        assert!((two.probabilities[1] - 0.5).abs() < 1e-15);
        assert!((two.probabilities[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cdf_small_cases() {
        assert_eq!(coupling_time_cdf(4, 3).unwrap(), 0.0);
        assert_eq!(coupling_time_cdf(1, 1).unwrap(), 1.0);
        assert!((coupling_time_cdf(2, 3).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn closed_form_agrees_for_small_n() {
        for n in 1..=12 {
            for t in 0..=30 {
                let a = occupancy_pmf(n, t).unwrap();
                let b = occupancy_pmf_inclusion_exclusion(n, t).unwrap();
                for (x, y) in a.probabilities.iter().zip(&b.probabilities) {
                    assert!((x - y).abs() < 1e-10, "n={n} t={t}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert!(occupancy_pmf(0, 3).is_err());
        assert!(occupancy_pmf_inclusion_exclusion(0, 3).is_err());
    }
}
