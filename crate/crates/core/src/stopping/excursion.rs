use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::walk::{Configuration, NoiseStream, WalkKind, Walker};

/// Counts of excursions of the distance chain that reached 0 before returning to 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcursionTally {
    pub reached_zero: u64,
    pub excursions: u64,
}

impl ExcursionTally {
    pub fn frequency(&self) -> f64 {
        self.reached_zero as f64 / self.excursions as f64
    }

    /// Binomial standard error at probability `p`.
    pub fn standard_error(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.excursions as f64).sqrt()
    }
}

/// Runs one excursion of a flip walk whose distance to `+` starts at 2.
///
/// Returns `true` if the distance hits 0 before coming back to 2.
fn one_excursion(n: usize, noise: NoiseStream) -> Result<bool> {
    let mut start = Configuration::all_plus(n)?;
    start.flip_in_place(0)?;
    start.flip_in_place(1)?;
    let mut walker = Walker::new(start, WalkKind::Flip, noise);
    let mut distance = 2usize;
    loop {
        let i = walker.advance();
        if walker.state().is_plus_unchecked(i) {
            distance -= 1;
        } else {
            distance += 1;
        }
        match distance {
            0 => return Ok(true),
            2 => return Ok(false),
            _ => {}
        }
    }
}

/// Simulates `excursions` independent excursions from distance 2 on the `N`-cube.
pub fn zero_before_return(
    n: usize,
    excursions: u64,
    seed: u64,
    exec: Execution,
) -> Result<ExcursionTally> {
    if n < 2 {
        return Err(Error::invalid("excursions from distance 2 need N >= 2"));
    }
    let outcomes = map_indexed(excursions, exec, |i| {
        one_excursion(n, NoiseStream::derived(seed, "ehrenfest", i))
    });
    let mut reached_zero = 0;
    for o in outcomes {
        reached_zero += u64::from(o?);
    }
    Ok(ExcursionTally {
        reached_zero,
        excursions,
    })
}
