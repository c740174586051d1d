//! Closed forms and small-N exact computations used as references for the samplers.

pub mod chain;
pub mod equilibrium;
pub mod moments;
pub mod occupancy;

pub use chain::{ehrenfest_zero_before_return, BirthDeathChain};
pub use equilibrium::{
    equilibrium_pointwise, expected_minus_count, minus_count_law, tv_distance_curve,
    tv_distance_to_uniform,
};
pub use moments::{
    expected_coupling_time, first_backtrack_survival, geometric_tail, harmonic,
    variance_coupling_time,
};
pub use occupancy::{
    coupling_time_cdf, occupancy_pmf, occupancy_pmf_inclusion_exclusion, OccupancyDistribution,
};

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    statrs::function::factorial::ln_binomial(n, k)
}

/// Neumaier-compensated sum.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum() {
        assert_eq!(neumaier_sum([1.0, 1e100, 1.0, -1e100]), 2.0);
        assert_eq!(neumaier_sum(std::iter::empty()), 0.0);
    }

    #[test]
    fn log_binomials() {
        assert!((ln_choose(10, 3).exp() - 120.0).abs() < 1e-9);
        assert_eq!(ln_choose(5, 0), 0.0);
        assert_eq!(ln_choose(3, 4), f64::NEG_INFINITY);
    }
}
