use serde_json::{json, Value as Json};

use super::output::{Row, Value};
use super::{Criterion, Experiment, ExperimentConfig};
use crate::error::{Error, Result};
use crate::exact::{
    ehrenfest_zero_before_return, expected_coupling_time,
    expected_minus_count, first_backtrack_survival, tv_distance_curve, variance_coupling_time,
    BirthDeathChain,
};
use crate::par::map_indexed;
use crate::stats::{
    ks_exponential, ks_two_sample, mean_ci, quenched_aggregate, two_proportion_test,
    EmpiricalLaw, SurvivalCurve,
};
use crate::stopping::coupling::default_coupling_cap;
use crate::stopping::environment::{default_hit_horizon, hit_time};
use crate::stopping::{
    beta_sandwich, coupling_time_direct_capped, coupling_time_geometric, distinct_prefix_points,
    estimate_beta, floor_steps, prefix_length, prefix_return_with, segments_disjoint,
    self_return, tail_profile, zero_before_return, Observation, RandomEnvironment,
    SetReturnOptions,
};
use crate::walk::{derive_seed, NoiseStream};

/// Times at which the exponential limit laws are checked.
pub const CHECK_TIMES: [f64; 3] = [0.5, 1.0, 2.0];

/// Sample rows plus whatever the summary needs beyond them.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub rows: Vec<Row>,
    detail: Detail,
}

#[derive(Debug, Clone)]
enum Detail {
    None,
    Couple { geometric: Vec<u64> },
    SelfReturn { backtrack: Vec<Observation> },
    SetReturn { beta: u64, set_sizes: Vec<usize> },
    Exact { excursions: Option<(u64, u64)> },
}

fn collect<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

fn observation_row(sample_id: u64, seed: u64, obs: Observation, scale: f64) -> Row {
    Row {
        sample_id,
        seed,
        value: Value::Steps(obs.raw()),
        normalized: obs.raw() as f64 / scale,
        censored: obs.is_censored(),
    }
}

fn scaled_horizon(default: u64, multiplier: f64) -> u64 {
    floor_steps(default as f64 * multiplier).max(1)
}

/// Draws every sample of the experiment. The result depends on the
/// configuration but not on the worker count.
pub fn generate(config: &ExperimentConfig) -> Result<Outcome> {
    config.validate()?;
    let n = config.n;
    let master = config.seed;
    let exec = config.execution();
    let id = config.experiment.id();
    let nf = n as f64;
    match config.experiment {
        Experiment::Couple => {
            let cap = scaled_horizon(default_coupling_cap(n), config.horizon_multiplier);
            let scale = nf * nf.ln();
            let direct = collect(map_indexed(config.samples, exec, |i| {
                coupling_time_direct_capped(n, derive_seed(master, id, i), cap)
            }))?;
            let geometric = collect(map_indexed(config.samples, exec, |i| {
                coupling_time_geometric(n, derive_seed(master, "couple-geometric", i))
            }))?;
            let rows = direct
                .iter()
                .enumerate()
                .map(|(i, s)| observation_row(i as u64, s.seed, Observation::Observed(s.time), scale))
                .collect();
            Ok(Outcome {
                rows,
                detail: Detail::Couple {
                    geometric: geometric.iter().map(|s| s.time).collect(),
                },
            })
        }
        Experiment::SelfReturn => {
            let base = (50.0 * nf).max(nf.powf(1.0 + config.delta));
            let horizon = floor_steps(base * config.horizon_multiplier).max(2);
            let samples = collect(map_indexed(config.samples, exec, |i| {
                self_return(n, derive_seed(master, id, i), horizon)
            }))?;
            let rows = samples
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    observation_row(i as u64, s.seed.unwrap_or_default(), s.self_intersection, nf)
                })
                .collect();
            Ok(Outcome {
                rows,
                detail: Detail::SelfReturn {
                    backtrack: samples.iter().map(|s| s.first_backtrack).collect(),
                },
            })
        }
        Experiment::Converge => {
            let steps = floor_steps(nf.powf(config.gamma) * config.t);
            let counts = collect(map_indexed(config.samples, exec, |i| {
                let seed = derive_seed(master, id, i);
                distinct_prefix_points(n, steps, seed).map(|c| (seed, c))
            }))?;
            let rows = counts
                .iter()
                .enumerate()
                .map(|(i, &(seed, c))| Row {
                    sample_id: i as u64,
                    seed,
                    value: Value::Steps(c as u64),
                    normalized: c as f64 / (steps + 1) as f64,
                    censored: false,
                })
                .collect();
            Ok(Outcome { rows, detail: Detail::None })
        }
        Experiment::SetReturn => {
            let m = prefix_length(n, config.gamma);
            let horizon = if config.horizon_multiplier == 1.0 {
                None
            } else {
                let base = 50.0 * 2f64.powi(n.min(1100) as i32) / (m + 1) as f64;
                Some(floor_steps(base * config.horizon_multiplier).max(m + 1))
            };
            let options = SetReturnOptions {
                kind: config.kind,
                horizon,
            };
            let samples = collect(map_indexed(config.samples, exec, |i| {
                prefix_return_with(n, config.gamma, derive_seed(master, id, i), &options)
            }))?;
            let raw: Vec<u64> = samples.iter().map(|s| s.return_time.raw()).collect();
            let beta = estimate_beta(&raw[..estimation_half(raw.len())])?;
            let rows = samples
                .iter()
                .enumerate()
                .map(|(i, s)| observation_row(i as u64, s.seed, s.return_time, beta as f64))
                .collect();
            Ok(Outcome {
                rows,
                detail: Detail::SetReturn {
                    beta,
                    set_sizes: samples.iter().map(|s| s.set_size).collect(),
                },
            })
        }
        Experiment::RandomSet => {
            let horizon = scaled_horizon(default_hit_horizon(n, config.gamma), config.horizon_multiplier);
            let scale = nf.powf(config.gamma);
            let walks = config.samples;
            let total = config
                .envs
                .checked_mul(walks)
                .ok_or_else(|| Error::invalid("too many samples"))?;
            let hits = collect(map_indexed(total, exec, |k| {
                let env = RandomEnvironment::new(n, config.gamma, derive_seed(master, "env", k / walks))?;
                let seed = derive_seed(master, id, k);
                hit_time(&env, NoiseStream::new(seed), horizon).map(|h| (seed, h))
            }))?;
            let rows = hits
                .iter()
                .enumerate()
                .map(|(k, &(seed, h))| observation_row(k as u64, seed, h, scale))
                .collect();
            Ok(Outcome { rows, detail: Detail::None })
        }
        Experiment::Reflect => {
            let (s, u) = (config.s, config.u);
            let per_side = config.samples;
            let outcomes = collect(map_indexed(2 * per_side, exec, |k| {
                let (lane, first, second, i) = if k < per_side {
                    ("reflect-forward", s + 1, u, k)
                } else {
                    ("reflect-backward", u, s + 1, k - per_side)
                };
                let seed = derive_seed(master, lane, i);
                segments_disjoint(n, first, second, NoiseStream::new(seed)).map(|d| (seed, d))
            }))?;
            let rows = outcomes
                .iter()
                .enumerate()
                .map(|(k, &(seed, disjoint))| Row {
                    sample_id: k as u64,
                    seed,
                    value: Value::Steps(u64::from(disjoint)),
                    normalized: f64::from(u8::from(disjoint)),
                    censored: false,
                })
                .collect();
            Ok(Outcome { rows, detail: Detail::None })
        }
        Experiment::Exact => {
            let t_max = config.t_max.unwrap_or_else(|| default_t_max(n));
            let tv = tv_distance_curve(n, t_max)?;
            let mut rows = Vec::with_capacity(tv.len());
            let mut occupancy = crate::exact::OccupancyDistribution::initial(n)?;
            for (t, &d) in tv.iter().enumerate() {
                if t > 0 {
                    occupancy.advance();
                }
                rows.push(Row {
                    sample_id: t as u64,
                    seed: 0,
                    value: Value::Real(d),
                    normalized: occupancy.complete(),
                    censored: false,
                });
            }
            let excursions = if config.samples > 0 {
                let tally = zero_before_return(n, config.samples, master, exec)?;
                Some((tally.reached_zero, tally.excursions))
            } else {
                None
            };
            Ok(Outcome {
                rows,
                detail: Detail::Exact { excursions },
            })
        }
    }
}

/// `floor(10 N ln N)`.
pub fn default_t_max(n: usize) -> u64 {
    let nf = n as f64;
    floor_steps(10.0 * nf * nf.ln())
}

/// Size of the leading half used to estimate `β`.
pub fn estimation_half(len: usize) -> usize {
    len / 2
}

fn steps(rows: &[Row]) -> Vec<u64> {
    rows.iter()
        .map(|r| match r.value {
            Value::Steps(t) => t,
            Value::Real(x) => x as u64,
        })
        .collect()
}

/// Summary statistics and criterion outcomes.
pub fn evaluate(config: &ExperimentConfig, outcome: &Outcome) -> Result<(Json, Vec<Criterion>)> {
    let n = config.n;
    let nf = n as f64;
    let rows = &outcome.rows;
    let censored = rows.iter().filter(|r| r.censored).count();
    let mut criteria = Vec::new();
    let summary = match (&config.experiment, &outcome.detail) {
        (Experiment::Couple, Detail::Couple { geometric }) => {
            let times = steps(rows);
            let law = EmpiricalLaw::from_counts(&times)?;
            let (mean, half_width) = mean_ci(&law, 0.95)?;
            let se = law.standard_error()?;
            let exact = expected_coupling_time(n)?;
            let ratio = mean / (nf * nf.ln());
            let ks = ks_two_sample(&law, &EmpiricalLaw::from_counts(geometric)?)?;
            criteria.push(Criterion::at_most(
                "coupling_mean_within_3se",
                (mean - exact).abs() / se,
                3.0,
            ));
            if n >= 1024 {
                criteria.push(Criterion::within("coupling_mean_over_n_log_n", ratio, 1.00, 1.12));
            }
            criteria.push(Criterion::at_least("direct_vs_geometric_ks_p", ks.p_value, 0.01));
            json!({
                "mean": mean,
                "ci95_half_width": half_width,
                "standard_error": se,
                "variance": law.variance()?,
                "exact_mean": exact,
                "exact_variance": variance_coupling_time(n)?,
                "mean_over_n_log_n": ratio,
                "min": law.values()[0],
                "direct_vs_geometric_ks": ks,
            })
        }
        (Experiment::SelfReturn, Detail::SelfReturn { backtrack }) => {
            let total = rows.len() as f64;
            let agree = rows
                .iter()
                .zip(backtrack)
                .filter(|(r, b)| !r.censored && b.value().map(Value::Steps) == Some(r.value))
                .count() as f64
                / total;
            let law = EmpiricalLaw::new(rows.iter().map(|r| r.normalized).collect())?;
            let ks = ks_exponential(&law)?;
            let curve = SurvivalCurve::exceeding(&law, &config.t_grid)?;
            if n >= 1000 {
                criteria.push(Criterion::at_least("self_intersection_is_backtrack", agree, 0.99));
                if rows.len() >= 5000 {
                    criteria.push(Criterion::at_most("self_intersection_ks_distance", ks.statistic, 0.03));
                }
            }
            json!({
                "agree_fraction": agree,
                "mean_normalized": law.mean()?,
                "ks_exponential": ks,
                "survival": curve,
                "censored": censored,
            })
        }
        (Experiment::Converge, _) => {
            let m = floor_steps(nf.powf(config.gamma) * config.t);
            let full = rows
                .iter()
                .filter(|r| r.value == Value::Steps(m + 1))
                .count() as f64
                / rows.len() as f64;
            let predicted = first_backtrack_survival(n, m)?;
            if predicted >= 0.99 {
                criteria.push(Criterion::at_least("distinct_prefix_fraction", full, 0.98));
            }
            let counts = EmpiricalLaw::from_counts(&steps(rows))?;
            json!({
                "steps": m,
                "full_fraction": full,
                "no_backtrack_probability": predicted,
                "mean_distinct": counts.mean()?,
                "min_distinct": counts.values()[0],
            })
        }
        (Experiment::SetReturn, Detail::SetReturn { beta, set_sizes }) => {
            let raw = steps(rows);
            let half = estimation_half(raw.len());
            let (first, second) = raw.split_at(half);
            let (at, below) = beta_sandwich(first, *beta);
            let e1 = (-1f64).exp();
            criteria.push(Criterion::new(
                "beta_sandwich",
                at,
                format!("P(R >= beta) <= e^-1 < P(R >= beta - 1) = {below}"),
                at <= e1 && below > e1,
            ));
            let law = EmpiricalLaw::scaled(second, *beta as f64)?;
            let mean_ratio = law.mean()?;
            let check = SurvivalCurve::exceeding(&law, &CHECK_TIMES)?;
            let tail = tail_profile(second, *beta, &[1, 2, 3]);
            let two_beta = tail.points[1].empirical;
            if n >= 20 {
                criteria.push(Criterion::at_most(
                    "return_survival_exponential",
                    check.max_exponential_gap(),
                    0.07,
                ));
                criteria.push(Criterion::within("return_mean_over_beta", mean_ratio, 0.85, 1.15));
                criteria.push(Criterion::at_most(
                    "return_tail_two_beta",
                    two_beta,
                    (-2f64).exp() + 0.05,
                ));
            }
            let mean_set = set_sizes.iter().sum::<usize>() as f64 / set_sizes.len() as f64;
            json!({
                "beta_hat": beta,
                "estimation_samples": half,
                "sandwich": { "at_beta": at, "at_beta_minus_one": below },
                "prefix_length": prefix_length(n, config.gamma),
                "mean_set_size": mean_set,
                "mean_over_beta": mean_ratio,
                "survival": SurvivalCurve::exceeding(&law, &config.t_grid)?,
                "tail": tail,
                "censored": censored,
            })
        }
        (Experiment::RandomSet, _) => {
            let walks = config.samples as usize;
            let curves = |grid: &[f64]| -> Result<Vec<SurvivalCurve>> {
                rows.chunks(walks)
                    .map(|env| {
                        let law = EmpiricalLaw::new(env.iter().map(|r| r.normalized).collect())?;
                        SurvivalCurve::exceeding(&law, grid)
                    })
                    .collect()
            };
            let check = quenched_aggregate(&curves(&CHECK_TIMES)?)?;
            let grid = quenched_aggregate(&curves(&config.t_grid)?)?;
            let black_start = rows.iter().filter(|r| r.value == Value::Steps(0)).count() as f64
                / rows.len() as f64;
            if n >= 1000 {
                criteria.push(Criterion::at_most(
                    "annealed_survival_exponential",
                    check.max_annealed_gap(),
                    0.05,
                ));
                criteria.push(Criterion::at_most(
                    "quenched_variance",
                    check.variance.iter().copied().fold(0.0, f64::max),
                    0.01,
                ));
            }
            json!({
                "environments": config.envs,
                "walks_per_environment": walks,
                "density": (nf).powf(-config.gamma),
                "black_start_fraction": black_start,
                "annealed": { "grid": grid.grid, "mean": grid.mean, "variance": grid.variance },
                "censored": censored,
            })
        }
        (Experiment::Reflect, _) => {
            let per_side = config.samples as usize;
            let hits = |part: &[Row]| part.iter().filter(|r| r.value == Value::Steps(1)).count() as u64;
            let forward = hits(&rows[..per_side]);
            let reflected = hits(&rows[per_side..]);
            let m = per_side as u64;
            let (z, p) = two_proportion_test(forward, m, reflected, m)?;
            criteria.push(Criterion::at_least("reflection_symmetry_p", p, 0.01));
            json!({
                "s": config.s,
                "u": config.u,
                "forward_probability": forward as f64 / m as f64,
                "reflected_probability": reflected as f64 / m as f64,
                "z": z,
                "p_value": p,
            })
        }
        (Experiment::Exact, Detail::Exact { excursions }) => {
            let tv: Vec<f64> = rows
                .iter()
                .map(|r| match r.value {
                    Value::Real(x) => x,
                    Value::Steps(t) => t as f64,
                })
                .collect();
            let worst_increase = tv.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
            criteria.push(Criterion::at_most("tv_nonincreasing", worst_increase, 0.0));
            let mixing_time = default_t_max(n);
            if let Some(&at) = tv.get(mixing_time as usize) {
                criteria.push(Criterion::at_most("tv_at_10_n_log_n", at, 1e-6));
            }
            let closed = ehrenfest_zero_before_return(n)?;
            let solved = BirthDeathChain::ehrenfest(n)?.excursion_probability(2, 0)?;
            criteria.push(Criterion::at_most("ehrenfest_linear_solve", (closed - solved).abs(), 1e-12));
            let mut summary = json!({
                "t_max": tv.len() - 1,
                "tv_final": tv.last(),
                "tv_at_10_n_log_n": tv.get(mixing_time as usize),
                "coupling_cdf_final": rows.last().map(|r| r.normalized),
                "expected_coupling_time": expected_coupling_time(n)?,
                "expected_minus_count_final": expected_minus_count(n, (tv.len() - 1) as u64)?,
                "ehrenfest_closed_form": closed,
                "ehrenfest_linear_solve": solved,
            });
            if let Some((reached, total)) = *excursions {
                let freq = reached as f64 / total as f64;
                let se = (closed * (1.0 - closed) / total as f64).sqrt();
                criteria.push(Criterion::at_most("ehrenfest_monte_carlo_se", (freq - closed).abs() / se, 3.0));
                summary["ehrenfest_monte_carlo"] = json!({ "reached_zero": reached, "excursions": total, "frequency": freq });
            }
            summary
        }
        _ => return Err(Error::Invariant("outcome does not match experiment".into())),
    };
    Ok((summary, criteria))
}
