use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::stopping::{check_gamma, floor_steps, Observation};
use crate::walk::{Configuration, NoiseStream, WalkKind, Walker};

/// Knobs shared by the set-return searches.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SetReturnOptions {
    pub kind: WalkKind,
    /// Hard cap on the search; defaults to `50 * 2^N / |F|`.
    pub horizon: Option<u64>,
}

/// One realization of the return time `R_N` to the trajectory prefix `F = V[0, floor(N^γ)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SetReturnSample {
    pub dimension: usize,
    pub gamma: f64,
    /// `m = floor(N^γ)`.
    pub prefix_len: u64,
    /// `|F|`, which is below `m + 1` when the prefix self-intersects.
    pub set_size: usize,
    pub return_time: Observation,
    pub seed: u64,
}

/// `floor(N^γ)`.
pub fn prefix_length(n: usize, gamma: f64) -> u64 {
    floor_steps((n as f64).powf(gamma))
}

fn default_set_horizon(n: usize, set_size: usize) -> u64 {
    floor_steps(50.0 * 2f64.powi(n.min(1100) as i32) / set_size as f64)
}

/// `R_N` for the flip walk from `+`.
pub fn prefix_return(n: usize, gamma: f64, seed: u64) -> Result<SetReturnSample> {
    prefix_return_with(n, gamma, seed, &SetReturnOptions::default())
}

pub fn prefix_return_with(
    n: usize,
    gamma: f64,
    seed: u64,
    options: &SetReturnOptions,
) -> Result<SetReturnSample> {
    check_gamma(gamma)?;
    let m = prefix_length(n, gamma);
    let mut walker = Walker::new(Configuration::all_plus(n)?, options.kind, NoiseStream::new(seed));
    let mut prefix: FxHashSet<Configuration> = FxHashSet::default();
    prefix.insert(walker.state().clone());
    for _ in 0..m {
        walker.advance();
        if !prefix.contains(walker.state()) {
            prefix.insert(walker.state().clone());
        }
    }
    let horizon = options
        .horizon
        .unwrap_or_else(|| default_set_horizon(n, prefix.len()));
    let return_time = loop {
        if walker.time() >= horizon {
            break Observation::Censored { horizon };
        }
        walker.advance();
        if prefix.contains(walker.state()) {
            break Observation::Observed(walker.time());
        }
    };
    Ok(SetReturnSample {
        dimension: n,
        gamma,
        prefix_len: m,
        set_size: prefix.len(),
        return_time,
        seed,
    })
}

/// `R^η_N`: first `t > 0` with the walk from `start` in the fixed set.
pub fn fixed_set_return(
    set: &FxHashSet<Configuration>,
    start: &Configuration,
    seed: u64,
    options: &SetReturnOptions,
) -> Result<Observation> {
    if set.is_empty() {
        return Err(Error::invalid("target set is empty"));
    }
    if let Some(c) = set.iter().find(|c| c.dimension() != start.dimension()) {
        return Err(Error::DimensionMismatch {
            left: start.dimension(),
            right: c.dimension(),
        });
    }
    if set.contains(start) {
        return Err(Error::invalid("start configuration lies in the target set"));
    }
    let horizon = options
        .horizon
        .unwrap_or_else(|| default_set_horizon(start.dimension(), set.len()));
    let mut walker = Walker::new(start.clone(), options.kind, NoiseStream::new(seed));
    while walker.time() < horizon {
        walker.advance();
        if set.contains(walker.state()) {
            return Ok(Observation::Observed(walker.time()));
        }
    }
    Ok(Observation::Censored { horizon })
}

/// `β̂`: the smallest integer `n` with empirical `P(R >= n) <= e^{-1}`.
pub fn estimate_beta(samples: &[u64]) -> Result<u64> {
    if samples.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable();
    let len = sorted.len();
    // largest count of samples >= n that is still <= len / e
    let allowed = (len as f64 * (-1f64).exp()).floor() as usize;
    Ok(sorted[len - 1 - allowed] + 1)
}

fn fraction_at_least(samples: &[u64], n: u64) -> f64 {
    samples.iter().filter(|&&x| x >= n).count() as f64 / samples.len() as f64
}

/// Empirical `(P(R >= β), P(R >= β - 1))`; on the estimating sample the first
/// is at most `e^{-1}` and the second strictly above it.
pub fn beta_sandwich(samples: &[u64], beta: u64) -> (f64, f64) {
    (
        fraction_at_least(samples, beta),
        fraction_at_least(samples, beta.saturating_sub(1)),
    )
}

/// Empirical geometric tail `P(R >= β n)` against `α^n`, with `α` fitted at `n = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailProfile {
    pub alpha: f64,
    pub points: Vec<TailPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailPoint {
    pub n: u64,
    pub empirical: f64,
    pub bound: f64,
}

pub fn tail_profile(samples: &[u64], beta: u64, ns: &[u64]) -> TailProfile {
    let alpha = fraction_at_least(samples, beta).max((-1f64).exp());
    let points = ns
        .iter()
        .map(|&n| TailPoint {
            n,
            empirical: fraction_at_least(samples, beta.saturating_mul(n)),
            bound: alpha.powi(n as i32),
        })
        .collect();
    TailProfile { alpha, points }
}

/// Whether the first `first` points of a flip walk from `+` are disjoint from the next `second`.
///
/// That is `V[0, first-1] ∩ V[first, first+second-1] = ∅`; either segment may be empty.
pub fn segments_disjoint(n: usize, first: u64, second: u64, noise: NoiseStream) -> Result<bool> {
    let mut walker = Walker::new(Configuration::all_plus(n)?, WalkKind::Flip, noise);
    if first == 0 || second == 0 {
        return Ok(true);
    }
    let mut head: FxHashSet<Configuration> = FxHashSet::default();
    head.insert(walker.state().clone());
    for _ in 1..first {
        walker.advance();
        head.insert(walker.state().clone());
    }
    for _ in 0..second {
        walker.advance();
        if head.contains(walker.state()) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn disjoint_fraction(
    n: usize,
    first: u64,
    second: u64,
    samples: u64,
    seed: u64,
    lane: &str,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let hits = map_indexed(samples, Execution::default(), |i| {
        segments_disjoint(n, first, second, NoiseStream::derived(seed, lane, i))
    })
    .into_iter()
    .collect::<Result<Vec<bool>>>()?;
    Ok(hits.iter().filter(|&&d| d).count() as f64 / samples as f64)
}

/// Monte Carlo estimate of `P(V[0,s] ∩ V[s+1,s+u] = ∅)`.
pub fn disjoint_segments_probability(n: usize, s: u64, u: u64, samples: u64, seed: u64) -> Result<f64> {
    disjoint_fraction(n, s + 1, u, samples, seed, "reflect-forward")
}

/// Monte Carlo estimate of the reflected event `P(V[0,u-1] ∩ V[u,u+s] = ∅)`.
pub fn reflected_segments_probability(n: usize, s: u64, u: u64, samples: u64, seed: u64) -> Result<f64> {
    disjoint_fraction(n, u, s + 1, samples, seed, "reflect-backward")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_of_constant_samples() {
        assert_eq!(estimate_beta(&[7; 10]).unwrap(), 8);
        assert!(estimate_beta(&[]).is_err());
    }

    #[test]
    fn beta_sandwich_holds() {
        let samples: Vec<u64> = (0..1000).map(|i| (i * 7919) % 1013).collect();
        let beta = estimate_beta(&samples).unwrap();
        let (at, below) = beta_sandwich(&samples, beta);
        let e1 = (-1f64).exp();
        assert!(at <= e1 && below > e1);
    }

    #[test]
    fn return_exceeds_prefix() {
        for seed in 0..50 {
            let s = prefix_return(8, 0.5, seed).unwrap();
            assert_eq!(s.prefix_len, 2);
            assert!(s.return_time.raw() > 2);
            assert!(s.set_size <= 3);
        }
        assert!(prefix_return(8, 1.0, 0).is_err());
        assert!(prefix_return(8, 0.0, 0).is_err());
    }

    #[test]
    fn fixed_set_complement_returns_at_once() {
        let n = 3;
        let start = Configuration::all_plus(n).unwrap();
        let set: FxHashSet<Configuration> = (0..8u64)
            .map(|b| Configuration::from_u64(n, b).unwrap())
            .filter(|c| c != &start)
            .collect();
        let o = SetReturnOptions::default();
        assert_eq!(fixed_set_return(&set, &start, 4, &o).unwrap(), Observation::Observed(1));
        let mut bad = set.clone();
        bad.insert(start.clone());
        assert!(fixed_set_return(&bad, &start, 4, &o).is_err());
        assert!(fixed_set_return(&FxHashSet::default(), &start, 4, &o).is_err());
    }

    #[test]
    fn fixed_set_return_parity() {
        let target = Configuration::all_plus(2).unwrap();
        let start = Configuration::all_minus(2).unwrap();
        let set: FxHashSet<Configuration> = [target].into_iter().collect();
        for seed in 0..100 {
            let t = fixed_set_return(&set, &start, seed, &SetReturnOptions::default())
                .unwrap()
                .value()
                .unwrap();
            assert_eq!(t % 2, 0);
        }
    }

    #[test]
    fn empty_segment_is_disjoint() {
        assert_eq!(disjoint_segments_probability(10, 3, 0, 20, 1).unwrap(), 1.0);
        assert_eq!(disjoint_segments_probability(2, 0, 1, 20, 1).unwrap(), 1.0);
        assert_eq!(reflected_segments_probability(10, 3, 0, 20, 1).unwrap(), 1.0);
    }
}
