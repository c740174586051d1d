//! Empirical laws, Kolmogorov–Smirnov tests, confidence intervals and
//! aggregation over random environments.

mod ks;
mod quenched;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

pub use ks::{kolmogorov_survival, ks_exponential, ks_two_sample, KsResult};
pub use quenched::{quenched_aggregate, QuenchedSummary};

/// A sample sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalLaw {
    values: Vec<f64>,
}

impl EmpiricalLaw {
    /// Sorts the sample. NaN is rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::invalid("sample contains NaN"));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn from_counts(values: &[u64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| v as f64).collect())
    }

    /// Each value divided by `scale`.
    pub fn scaled(values: &[u64], scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::invalid(format!("scale must be positive, got {scale}")));
        }
        Self::new(values.iter().map(|&v| v as f64 / scale).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn require(&self, needed: usize) -> Result<()> {
        if self.values.len() < needed {
            return Err(Error::InsufficientData {
                needed,
                got: self.values.len(),
            });
        }
        Ok(())
    }

    /// `#{x >= t} / n`.
    pub fn survival(&self, t: f64) -> Result<f64> {
        self.require(1)?;
        let below = self.values.partition_point(|&x| x < t);
        Ok((self.values.len() - below) as f64 / self.values.len() as f64)
    }

    /// `#{x > t} / n`.
    pub fn exceedance(&self, t: f64) -> Result<f64> {
        self.require(1)?;
        let at_most = self.values.partition_point(|&x| x <= t);
        Ok((self.values.len() - at_most) as f64 / self.values.len() as f64)
    }

    /// `#{x <= t} / n`.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        Ok(1.0 - self.exceedance(t)?)
    }

    /// Smallest sample value `x` with `cdf(x) >= p`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        self.require(1)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("quantile level must lie in [0,1], got {p}")));
        }
        let n = self.values.len();
        let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
        Ok(self.values[rank - 1])
    }

    pub fn mean(&self) -> Result<f64> {
        self.require(1)?;
        Ok(crate::exact::neumaier_sum(self.values.iter().copied()) / self.values.len() as f64)
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> Result<f64> {
        self.require(2)?;
        let m = self.mean()?;
        let ss = crate::exact::neumaier_sum(self.values.iter().map(|x| (x - m) * (x - m)));
        Ok(ss / (self.values.len() - 1) as f64)
    }

    pub fn standard_error(&self) -> Result<f64> {
        Ok((self.variance()? / self.values.len() as f64).sqrt())
    }
}

/// Minimum sample size for a normal-approximation interval.
pub const MIN_CI_SAMPLES: usize = 30;

/// Sample mean and half-width `z s / sqrt(n)` of the two-sided interval at `level`.
pub fn mean_ci(law: &EmpiricalLaw, level: f64) -> Result<(f64, f64)> {
    law.require(MIN_CI_SAMPLES)?;
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(format!("confidence level must lie in (0,1), got {level}")));
    }
    let z = standard_normal().inverse_cdf(0.5 + level / 2.0);
    Ok((law.mean()?, z * law.standard_error()?))
}

fn standard_normal() -> Normal {
    Normal::standard()
}

/// Survival estimates on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl SurvivalCurve {
    /// `law.survival(t)` at each grid point.
    pub fn at_least(law: &EmpiricalLaw, grid: &[f64]) -> Result<Self> {
        Self::build(grid, |t| law.survival(t))
    }

    /// `law.exceedance(t)` at each grid point.
    pub fn exceeding(law: &EmpiricalLaw, grid: &[f64]) -> Result<Self> {
        Self::build(grid, |t| law.exceedance(t))
    }

    fn build(grid: &[f64], f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        check_grid(grid)?;
        let values = grid.iter().map(|&t| f(t)).collect::<Result<_>>()?;
        Ok(Self {
            grid: grid.to_vec(),
            values,
        })
    }

    /// Largest `|values[i] - e^{-grid[i]}|`.
    pub fn max_exponential_gap(&self) -> f64 {
        self.grid
            .iter()
            .zip(&self.values)
            .map(|(t, v)| (v - (-t).exp()).abs())
            .fold(0.0, f64::max)
    }
}

/// Requires a nonempty, strictly increasing, finite grid.
pub fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("t-grid must be nonempty and finite"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("t-grid must be strictly increasing"));
    }
    Ok(())
}

/// Pooled two-proportion z-test; returns `(z, two-sided p)`.
pub fn two_proportion_test(hits_a: u64, n_a: u64, hits_b: u64, n_b: u64) -> Result<(f64, f64)> {
    if n_a == 0 || n_b == 0 || hits_a > n_a || hits_b > n_b {
        return Err(Error::invalid("proportion counts must satisfy 0 <= hits <= n, n > 0"));
    }
    let pa = hits_a as f64 / n_a as f64;
    let pb = hits_b as f64 / n_b as f64;
    let pooled = (hits_a + hits_b) as f64 / (n_a + n_b) as f64;
    let se = (pooled * (1.0 - pooled) * (1.0 / n_a as f64 + 1.0 / n_b as f64)).sqrt();
    if se == 0.0 {
        return Ok((0.0, 1.0));
    }
    let z = (pa - pb) / se;
    let p = 2.0 * standard_normal().sf(z.abs());
    Ok((z, p.min(1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law(v: &[f64]) -> EmpiricalLaw {
        EmpiricalLaw::new(v.to_vec()).unwrap()
    }

    #[test]
    fn survival_counts() {
        let l = law(&[3.0, 1.0, 2.0]);
        assert_eq!(l.survival(0.5).unwrap(), 1.0);
        assert_eq!(l.survival(1.0).unwrap(), 1.0);
        assert!((l.survival(2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((l.exceedance(2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(l.survival(3.5).unwrap(), 0.0);
        assert!(law(&[]).survival(1.0).is_err());
        assert!(EmpiricalLaw::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn quantiles() {
        let l = law(&[4.0, 1.0, 3.0, 2.0]);
        assert_eq!(l.quantile(0.0).unwrap(), 1.0);
        assert_eq!(l.quantile(0.5).unwrap(), 2.0);
        assert_eq!(l.quantile(0.51).unwrap(), 3.0);
        assert_eq!(l.quantile(1.0).unwrap(), 4.0);
    }

    #[test]
    fn constant_sample_has_zero_width() {
        let l = law(&[2.5; 40]);
        let (m, h) = mean_ci(&l, 0.95).unwrap();
        assert_eq!(m, 2.5);
        assert_eq!(h, 0.0);
        assert!(matches!(
            mean_ci(&law(&[1.0; 29]), 0.95),
            Err(Error::InsufficientData { needed: 30, got: 29 })
        ));
    }

    #[test]
    fn normal_quantile() {
        let l = law(&(0..100).map(|i| i as f64).collect::<Vec<_>>());
        let (_, h) = mean_ci(&l, 0.95).unwrap();
        let se = l.standard_error().unwrap();
        assert!((h / se - 1.959963984540054).abs() < 1e-9);
    }

    #[test]
    fn proportions() {
        let (z, p) = two_proportion_test(50, 100, 50, 100).unwrap();
        assert_eq!(z, 0.0);
        assert!((p - 1.0).abs() < 1e-12);
        let (_, p) = two_proportion_test(10, 1000, 100, 1000).unwrap();
        assert!(p < 1e-10);
        assert_eq!(two_proportion_test(0, 10, 0, 10).unwrap().1, 1.0);
        assert!(two_proportion_test(11, 10, 0, 10).is_err());
    }

    #[test]
    fn grids() {
        assert!(check_grid(&[0.25, 0.5, 1.0]).is_ok());
        assert!(check_grid(&[0.5, 0.5]).is_err());
        assert!(check_grid(&[]).is_err());
        let c = SurvivalCurve::at_least(&law(&[0.0, 1.0]), &[0.5]).unwrap();
        assert_eq!(c.values, vec![0.5]);
    }
}
