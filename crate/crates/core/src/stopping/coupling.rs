use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stopping::{floor_steps, Observation};
use crate::walk::dynamics::coupled_step_in_place;
use crate::walk::{Configuration, NoiseStream};

/// One realization of the coupling time `t_N^-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingSample {
    pub dimension: usize,
    pub time: u64,
    pub seed: u64,
}

fn check_dimension(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    Ok(())
}

/// Default hard cap: 50 times `N(1 + ln N)`.
pub fn default_coupling_cap(n: usize) -> u64 {
    let n = n as f64;
    floor_steps(50.0 * n * (1.0 + n.ln())).max(64)
}

/// Coupling time by running the two heat-bath walks from `+` and `-` on shared noise.
pub fn coupling_time_direct(n: usize, seed: u64) -> Result<CouplingSample> {
    coupling_time_direct_capped(n, seed, default_coupling_cap(n))
}

/// As [`coupling_time_direct`] with an explicit cap.
///
/// Tracks both the meeting time of the coupled walks and the first time every
/// coordinate has been drawn, and fails if they ever disagree.
pub fn coupling_time_direct_capped(n: usize, seed: u64, cap: u64) -> Result<CouplingSample> {
    check_dimension(n)?;
    let mut plus = Configuration::all_plus(n)?;
    let mut minus = Configuration::all_minus(n)?;
    let mut seen = Configuration::all_minus(n)?;
    let mut noise = NoiseStream::new(seed);
    let mut distance = n;
    let mut covered = 0usize;
    let mut t = 0u64;
    while distance > 0 {
        if t >= cap {
            return Err(Error::HorizonExceeded { horizon: cap });
        }
        let s = noise.next_step(n);
        t += 1;
        let resolved = coupled_step_in_place(&mut plus, &mut minus, s.index, s.uniform);
        let fresh = !seen.is_plus_unchecked(s.index);
        if fresh {
            seen.flip_unchecked(s.index);
            covered += 1;
        }
        if resolved != fresh {
            return Err(Error::Invariant(format!(
                "coupling step {t}: resolved={resolved} but first draw={fresh}"
            )));
        }
        if resolved {
            distance -= 1;
        }
    }
    if covered != n || plus != minus {
        return Err(Error::Invariant(
            "walks met before every coordinate was drawn".into(),
        ));
    }
    Ok(CouplingSample {
        dimension: n,
        time: t,
        seed,
    })
}

/// Coupling time as `1 + sum_{k=2..N} G_k` with `G_k` geometric of parameter
/// `p_k = 1 - (k-1)/N`, each drawn by inverting its CDF.
pub fn coupling_time_geometric(n: usize, seed: u64) -> Result<CouplingSample> {
    check_dimension(n)?;
    let mut noise = NoiseStream::new(seed);
    let nf = n as f64;
    let mut time = 1u64;
    for k in 2..=n {
        let p = 1.0 - (k - 1) as f64 / nf;
        // 1 - U lies in (0, 1]
        let w = 1.0 - noise.next_uniform();
        let g = (w.ln() / (-p).ln_1p()).ceil();
        time += if g.is_finite() && g > 1.0 { g as u64 } else { 1 };
    }
    Ok(CouplingSample {
        dimension: n,
        time,
        seed,
    })
}

/// First time two heat-bath walks from `a` and `b`, driven by the same noise, coincide.
pub fn coupled_meeting_time(
    a: &Configuration,
    b: &Configuration,
    noise: &mut NoiseStream,
    horizon: u64,
) -> Result<Observation> {
    let mut distance = a.hamming_distance(b)?;
    let mut a = a.clone();
    let mut b = b.clone();
    let n = a.dimension();
    let mut t = 0;
    while distance > 0 {
        if t >= horizon {
            return Ok(Observation::Censored { horizon });
        }
        let s = noise.next_step(n);
        t += 1;
        if coupled_step_in_place(&mut a, &mut b, s.index, s.uniform) {
            distance -= 1;
        }
    }
    Ok(Observation::Observed(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_one() {
        for seed in 0..20 {
            assert_eq!(coupling_time_direct(1, seed).unwrap().time, 1);
            assert_eq!(coupling_time_geometric(1, seed).unwrap().time, 1);
        }
    }

    #[test]
    fn at_least_n() {
        for seed in 0..50 {
            assert!(coupling_time_direct(12, seed).unwrap().time >= 12);
            assert!(coupling_time_geometric(12, seed).unwrap().time >= 12);
        }
    }

    #[test]
    fn cap_is_an_error() {
        assert!(matches!(
            coupling_time_direct_capped(50, 3, 10),
            Err(Error::HorizonExceeded { horizon: 10 })
        ));
        assert!(coupling_time_direct(0, 1).is_err());
    }

    #[test]
    fn meeting_from_equal_is_zero() {
        let a = Configuration::all_plus(5).unwrap();
        let mut noise = NoiseStream::new(1);
        assert_eq!(
            coupled_meeting_time(&a, &a, &mut noise, 10).unwrap(),
            Observation::Observed(0)
        );
    }

    #[test]
    fn meeting_matches_direct_from_extremes() {
        let a = Configuration::all_plus(30).unwrap();
        let b = Configuration::all_minus(30).unwrap();
        for seed in 0..20 {
            let mut noise = NoiseStream::new(seed);
            let met = coupled_meeting_time(&a, &b, &mut noise, 1 << 20).unwrap();
            assert_eq!(met.value(), Some(coupling_time_direct(30, seed).unwrap().time));
        }
    }
}
