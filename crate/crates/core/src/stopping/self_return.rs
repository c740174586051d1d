use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stopping::Observation;
use crate::walk::{Configuration, NoiseStream, WalkKind, Walker};

/// First self-intersection `S_N` and first immediate backtrack `Γ_1` of one flip walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfReturnSample {
    pub dimension: usize,
    pub self_intersection: Observation,
    pub first_backtrack: Observation,
    pub horizon: u64,
    pub seed: Option<u64>,
}

impl SelfReturnSample {
    /// `S_N == Γ_1`, when both were observed.
    pub fn agree(&self) -> Option<bool> {
        Some(self.self_intersection.value()? == self.first_backtrack.value()?)
    }
}

/// Runs the flip walk from `+` on the noise stream of `seed`.
pub fn self_return(n: usize, seed: u64, horizon: u64) -> Result<SelfReturnSample> {
    let mut sample = self_return_from_indices(n, NoiseStream::new(seed).indices(n), horizon)?;
    sample.seed = Some(seed);
    Ok(sample)
}

/// Runs the flip walk from `+` on an explicit index sequence `I(1), I(2), ...`.
///
/// A finite sequence shorter than the horizon censors at its length.
pub fn self_return_from_indices<I>(n: usize, indices: I, horizon: u64) -> Result<SelfReturnSample>
where
    I: IntoIterator<Item = usize>,
{
    if horizon < 2 {
        return Err(Error::invalid("self-return horizon must be at least 2"));
    }
    let mut state = Configuration::all_plus(n)?;
    let mut visited: FxHashSet<Configuration> = FxHashSet::default();
    visited.insert(state.clone());

    let mut intersection = None;
    let mut backtrack = None;
    let mut previous_index = None;
    let mut k = 0u64;
    let mut iter = indices.into_iter();
    while k < horizon {
        let Some(i) = iter.next() else { break };
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, dimension: n });
        }
        k += 1;
        if backtrack.is_none() && previous_index == Some(i) {
            backtrack = Some(k);
        }
        previous_index = Some(i);
        if intersection.is_none() {
            state.flip_unchecked(i);
            if visited.contains(&state) {
                intersection = Some(k);
                visited = FxHashSet::default();
            } else {
                visited.insert(state.clone());
            }
        }
        if intersection.is_some() && backtrack.is_some() {
            break;
        }
    }
    let censor = |v: Option<u64>| match v {
        Some(t) => Observation::Observed(t),
        None => Observation::Censored { horizon: k },
    };
    Ok(SelfReturnSample {
        dimension: n,
        self_intersection: censor(intersection),
        first_backtrack: censor(backtrack),
        horizon,
        seed: None,
    })
}

/// Number of distinct configurations among `ξ(0), ..., ξ(steps)` of a flip walk from `+`.
pub fn distinct_prefix_points(n: usize, steps: u64, seed: u64) -> Result<usize> {
    let mut walker = Walker::new(Configuration::all_plus(n)?, WalkKind::Flip, NoiseStream::new(seed));
    let mut seen: FxHashSet<Configuration> = FxHashSet::default();
    seen.insert(walker.state().clone());
    for _ in 0..steps {
        walker.advance();
        if !seen.contains(walker.state()) {
            seen.insert(walker.state().clone());
        }
    }
    Ok(seen.len())
}
