use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::stopping::{check_gamma, floor_steps, Observation};
use crate::walk::noise::mix64;
use crate::walk::{Configuration, NoiseStream, WalkKind, Walker};

/// The random set `M` of "black" vertices, each present with probability `N^{-γ}`.
///
/// The set is never materialized. Membership is a keyed pseudorandom function
/// of the packed configuration compared against `θ = round(2^64 N^{-γ})`, so
/// it is consistent across revisits and independent across environment seeds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomEnvironment {
    pub seed: u64,
    pub gamma: f64,
    pub dimension: usize,
    threshold: u128,
}

impl RandomEnvironment {
    pub fn new(dimension: usize, gamma: f64, seed: u64) -> Result<Self> {
        check_gamma(gamma)?;
        Configuration::all_plus(dimension)?;
        let density = (dimension as f64).powf(-gamma);
        let threshold = (density * 2f64.powi(64)).round() as u128;
        Ok(Self {
            seed,
            gamma,
            dimension,
            threshold: threshold.min(1u128 << 64),
        })
    }

    /// Nominal density `N^{-γ}`.
    pub fn density(&self) -> f64 {
        (self.dimension as f64).powf(-self.gamma)
    }

    /// `θ`; membership holds when the keyed hash falls below it.
    pub fn threshold(&self) -> u128 {
        self.threshold
    }

    fn key(&self, c: &Configuration) -> u64 {
        let mut h = mix64(self.seed ^ 0x1f83_d9ab_fb41_bd6b);
        for &w in c.words() {
            h = mix64(h ^ w).wrapping_add(0x9e37_79b9_7f4a_7c15);
        }
        mix64(h ^ c.dimension() as u64)
    }

    pub fn contains(&self, c: &Configuration) -> bool {
        (self.key(c) as u128) < self.threshold
    }
}

pub fn environment_member(env: &RandomEnvironment, c: &Configuration) -> bool {
    env.contains(c)
}

/// One realization of `Θ`, the first arrival of the flip walk from `+` in `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitSample {
    pub hit: Observation,
    pub env_seed: u64,
    pub walk_seed: u64,
}

/// Default horizon: 50 times `N^γ`.
pub fn default_hit_horizon(n: usize, gamma: f64) -> u64 {
    floor_steps(50.0 * (n as f64).powf(gamma)).max(100)
}

/// `Θ = inf{t >= 0 : ξ(t) ∈ M}`; a black starting vertex gives `Θ = 0`.
pub fn random_set_hit(
    n: usize,
    gamma: f64,
    env_seed: u64,
    walk_seed: u64,
    horizon: Option<u64>,
) -> Result<HitSample> {
    let env = RandomEnvironment::new(n, gamma, env_seed)?;
    let horizon = horizon.unwrap_or_else(|| default_hit_horizon(n, gamma));
    let hit = hit_time(&env, NoiseStream::new(walk_seed), horizon)?;
    Ok(HitSample {
        hit,
        env_seed,
        walk_seed,
    })
}

/// First arrival of a flip walk from `+` in an already built environment.
pub fn hit_time(env: &RandomEnvironment, noise: NoiseStream, horizon: u64) -> Result<Observation> {
    let mut walker = Walker::new(Configuration::all_plus(env.dimension)?, WalkKind::Flip, noise);
    if env.contains(walker.state()) {
        return Ok(Observation::Observed(0));
    }
    while walker.time() < horizon {
        walker.advance();
        if env.contains(walker.state()) {
            return Ok(Observation::Observed(walker.time()));
        }
    }
    Ok(Observation::Censored { horizon })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_is_deterministic() {
        let env = RandomEnvironment::new(40, 0.5, 9).unwrap();
        let c = Configuration::all_plus(40).unwrap().flip_coordinate(3).unwrap();
        assert_eq!(env.contains(&c), env.contains(&c.clone()));
        let again = RandomEnvironment::new(40, 0.5, 9).unwrap();
        assert_eq!(env.contains(&c), again.contains(&c));
    }

    #[test]
    fn threshold_matches_density() {
        let env = RandomEnvironment::new(100, 0.5, 0).unwrap();
        let expected = 0.1 * 2f64.powi(64);
        assert!((env.threshold() as f64 - expected).abs() / expected < 1e-12);
        assert!(RandomEnvironment::new(100, 1.5, 0).is_err());
    }

    #[test]
    fn hit_is_black_and_first() {
        for seed in 0..30 {
            let s = random_set_hit(16, 0.5, seed, seed + 100, None).unwrap();
            let env = RandomEnvironment::new(16, 0.5, seed).unwrap();
            let Some(theta) = s.hit.value() else { continue };
            let mut w = Walker::new(
                Configuration::all_plus(16).unwrap(),
                WalkKind::Flip,
                NoiseStream::new(seed + 100),
            );
            for _ in 0..theta {
                assert!(!env.contains(w.state()));
                w.advance();
            }
            assert!(env.contains(w.state()));
        }
    }
}
