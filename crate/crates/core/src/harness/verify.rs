use std::path::Path;

use serde::{Deserialize, Serialize};

use super::experiments::estimation_half;
use super::output::{parse_csv, read_file, render_csv};
use super::{evaluate, generate, read_manifest, Criterion, Experiment};
use crate::error::{Error, Result};
use crate::stopping::beta_sandwich;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub manifest: String,
    pub experiment: Experiment,
    pub criteria: Vec<Criterion>,
    pub passed: bool,
}

/// Regenerates the samples of a finished run, checks them against the files on
/// disk and re-evaluates every criterion.
pub fn verify(manifest_path: &Path) -> Result<VerifyReport> {
    let manifest = read_manifest(manifest_path)?;
    let config = &manifest.config;
    config.validate()?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let recorded = read_file(&dir.join(&manifest.samples_file))?;
    let recorded_rows = parse_csv(&recorded)?;

    let mut criteria = Vec::new();
    if config.experiment == Experiment::SetReturn {
        let beta = manifest
            .summary
            .get("beta_hat")
            .and_then(|b| b.as_u64())
            .ok_or_else(|| Error::Malformed("summary has no beta_hat".into()))?;
        let values = recorded_rows
            .iter()
            .map(|(_, v)| {
                v.parse::<u64>()
                    .map_err(|_| Error::Malformed(format!("bad return time {v:?}")))
            })
            .collect::<Result<Vec<u64>>>()?;
        let (at, below) = beta_sandwich(&values[..estimation_half(values.len())], beta);
        let e1 = (-1f64).exp();
        criteria.push(Criterion::new(
            "recorded_beta_sandwich",
            at,
            format!("P(R >= beta) <= e^-1 < P(R >= beta - 1) = {below}"),
            at <= e1 && below > e1,
        ));
    }

    let outcome = generate(config)?;
    let regenerated = render_csv(&outcome.rows)?;
    criteria.push(Criterion::new(
        "samples_reproduced",
        recorded_rows.len() as f64,
        format!("byte-identical to {} regenerated rows", outcome.rows.len()),
        regenerated == recorded,
    ));
    let (_, evaluated) = evaluate(config, &outcome)?;
    criteria.extend(evaluated);
    Ok(VerifyReport {
        manifest: manifest_path.display().to_string(),
        experiment: config.experiment,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    })
}
