use serde::{Deserialize, Serialize};

use super::SurvivalCurve;
use crate::error::{Error, Result};

/// Survival estimates per environment and their spread across environments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuenchedSummary {
    pub grid: Vec<f64>,
    /// `per_environment[e][k]`: estimate in environment `e` at `grid[k]`.
    pub per_environment: Vec<Vec<f64>>,
    /// Across-environment mean at each grid point (the annealed estimate).
    pub mean: Vec<f64>,
    /// Across-environment unbiased variance at each grid point.
    pub variance: Vec<f64>,
}

impl QuenchedSummary {
    pub fn environments(&self) -> usize {
        self.per_environment.len()
    }

    /// Largest `|mean[k] - e^{-grid[k]}|`.
    pub fn max_annealed_gap(&self) -> f64 {
        self.grid
            .iter()
            .zip(&self.mean)
            .map(|(t, m)| (m - (-t).exp()).abs())
            .fold(0.0, f64::max)
    }
}

pub fn quenched_aggregate(curves: &[SurvivalCurve]) -> Result<QuenchedSummary> {
    if curves.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: curves.len(),
        });
    }
    let grid = curves[0].grid.clone();
    if curves.iter().any(|c| c.grid != grid || c.values.len() != grid.len()) {
        return Err(Error::invalid("environments were evaluated on different t-grids"));
    }
    let e = curves.len() as f64;
    let mut mean = Vec::with_capacity(grid.len());
    let mut variance = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        // shifted by the first environment so equal estimates give exactly zero spread
        let origin = curves[0].values[k];
        let shift = curves.iter().map(|c| c.values[k] - origin).sum::<f64>() / e;
        let ss: f64 = curves
            .iter()
            .map(|c| (c.values[k] - origin - shift).powi(2))
            .sum();
        mean.push(origin + shift);
        variance.push(ss / (e - 1.0));
    }
    Ok(QuenchedSummary {
        grid,
        per_environment: curves.iter().map(|c| c.values.clone()).collect(),
        mean,
        variance,
    })
}
