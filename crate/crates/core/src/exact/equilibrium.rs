//! Exact law of the heat-bath walk `σ⁺(t)` started from `+`.
//!
//! After `t` steps the set of refreshed coordinates has the occupancy law and,
//! given its size `r`, is a uniform `r`-subset; each refreshed coordinate is an
//! independent fair sign and the rest are still `+1`. Everything below follows
//! from that decomposition.

use crate::error::{Error, Result};
use crate::exact::occupancy::{occupancy_pmf, OccupancyDistribution};
use crate::exact::{ln_choose, neumaier_sum};

fn point_probability(occupancy: &OccupancyDistribution, d: usize) -> f64 {
    let n = occupancy.dimension;
    let terms = (d..=n).map(|r| {
        // C(N-d, r-d) / C(N, r) = Π_{i<d} (r-i)/(N-i)
        let subset: f64 = (0..d).map(|i| (r - i) as f64 / (n - i) as f64).product();
        occupancy.probabilities[r] * subset * 0.5f64.powi(r as i32)
    });
    neumaier_sum(terms)
}

/// `P(σ⁺(t) = ζ)` for any `ζ` with exactly `d` minus spins.
pub fn equilibrium_pointwise(n: usize, t: u64, d: usize) -> Result<f64> {
    if d > n {
        return Err(Error::invalid(format!("minus count {d} exceeds dimension {n}")));
    }
    Ok(point_probability(&occupancy_pmf(n, t)?, d))
}

fn binomial_half_pmf(r: usize, d: usize) -> f64 {
    if d > r {
        return 0.0;
    }
    (ln_choose(r as u64, d as u64) - r as f64 * std::f64::consts::LN_2).exp()
}

/// Law of the number of minus spins of `σ⁺(t)`, a mixture of `Binomial(r, 1/2)` over the occupancy law.
pub fn minus_count_law(occupancy: &OccupancyDistribution) -> Vec<f64> {
    let n = occupancy.dimension;
    (0..=n)
        .map(|d| {
            neumaier_sum(
                (d..=n).map(|r| occupancy.probabilities[r] * binomial_half_pmf(r, d)),
            )
        })
        .collect()
}

fn tv_from_occupancy(occupancy: &OccupancyDistribution) -> f64 {
    let n = occupancy.dimension;
    // the walk's law is constant on each distance shell, so the TV distance
    // reduces to the shell masses; the occupancy law sums to one, so each
    // shell's excess over uniform only involves the unfinished collections
    // and avoids subtracting two nearly equal masses
    0.5 * neumaier_sum((0..=n).map(|d| {
        let uniform = binomial_half_pmf(n, d);
        neumaier_sum(
            (0..n).map(|r| occupancy.probabilities[r] * (binomial_half_pmf(r, d) - uniform)),
        )
        .abs()
    }))
}

/// Total variation distance between the law of `σ⁺(t)` and the uniform measure on the cube.
pub fn tv_distance_to_uniform(n: usize, t: u64) -> Result<f64> {
    Ok(tv_from_occupancy(&occupancy_pmf(n, t)?))
}

/// `tv_distance_to_uniform(n, t)` for `t = 0..=t_max`.
pub fn tv_distance_curve(n: usize, t_max: u64) -> Result<Vec<f64>> {
    let mut occupancy = OccupancyDistribution::initial(n)?;
    let mut curve = Vec::with_capacity(t_max as usize + 1);
    curve.push(tv_from_occupancy(&occupancy));
    for _ in 0..t_max {
        occupancy.advance();
        curve.push(tv_from_occupancy(&occupancy));
    }
    Ok(curve)
}

/// Expected number of minus spins of `σ⁺(t)`.
pub fn expected_minus_count(n: usize, t: u64) -> Result<f64> {
    let law = minus_count_law(&occupancy_pmf(n, t)?);
    Ok(neumaier_sum(law.iter().enumerate().map(|(d, p)| d as f64 * p)))
}
