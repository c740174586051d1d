use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::walk::config::Configuration;
use crate::walk::noise::NoiseStream;

/// The two single-site dynamics on the hypercube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum WalkKind {
    /// Lazy walk `σ`: coordinate `I(t)` is reset to `+1` if `U(t) < 1/2`, else to `-1`.
    HeatBath,
    /// Periodic walk `ξ`: coordinate `I(t)` is toggled; `U(t)` is ignored.
    #[default]
    Flip,
}

impl WalkKind {
    /// Applies one step to `c` in place. Caller guarantees `i < N`.
    #[inline]
    pub(crate) fn apply(self, c: &mut Configuration, i: usize, u: f64) {
        match self {
            // u == 1/2 falls on the minus branch.
            WalkKind::HeatBath => c.set_unchecked(i, u < 0.5),
            WalkKind::Flip => c.flip_unchecked(i),
        }
    }

    /// Whether the dynamics reads `U(t)`.
    pub fn uses_uniform(self) -> bool {
        matches!(self, WalkKind::HeatBath)
    }
}

fn check_step_args(c: &Configuration, i: usize, u: f64) -> Result<()> {
    if i >= c.dimension() {
        return Err(Error::IndexOutOfRange {
            index: i,
            dimension: c.dimension(),
        });
    }
    if !(0.0..1.0).contains(&u) {
        return Err(Error::invalid(format!("uniform must lie in [0,1), got {u}")));
    }
    Ok(())
}

/// One step of the given dynamics driven by `(i, u)`.
pub fn step(c: &Configuration, kind: WalkKind, i: usize, u: f64) -> Result<Configuration> {
    check_step_args(c, i, u)?;
    let mut out = c.clone();
    kind.apply(&mut out, i, u);
    Ok(out)
}

/// Heat-bath step of two walks on the same noise.
///
/// Afterwards coordinate `i` agrees in both outputs, so the Hamming distance
/// drops by one when they disagreed there and is unchanged otherwise.
pub fn coupled_step(
    a: &Configuration,
    b: &Configuration,
    i: usize,
    u: f64,
) -> Result<(Configuration, Configuration)> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            left: a.dimension(),
            right: b.dimension(),
        });
    }
    check_step_args(a, i, u)?;
    let mut a = a.clone();
    let mut b = b.clone();
    coupled_step_in_place(&mut a, &mut b, i, u);
    Ok((a, b))
}

/// In-place coupled heat-bath step; returns `true` when a disagreement at `i` was resolved.
#[inline]
pub(crate) fn coupled_step_in_place(
    a: &mut Configuration,
    b: &mut Configuration,
    i: usize,
    u: f64,
) -> bool {
    let disagreed = a.is_plus_unchecked(i) != b.is_plus_unchecked(i);
    WalkKind::HeatBath.apply(a, i, u);
    WalkKind::HeatBath.apply(b, i, u);
    disagreed
}

/// A single walk driven by its own noise stream.
#[derive(Debug, Clone)]
pub struct Walker {
    state: Configuration,
    kind: WalkKind,
    noise: NoiseStream,
    time: u64,
}

impl Walker {
    pub fn new(start: Configuration, kind: WalkKind, noise: NoiseStream) -> Self {
        Self {
            state: start,
            kind,
            noise,
            time: 0,
        }
    }

    pub fn state(&self) -> &Configuration {
        &self.state
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn kind(&self) -> WalkKind {
        self.kind
    }

    /// Advances one step and returns the coordinate `I(t)` that was updated.
    #[inline]
    pub fn advance(&mut self) -> usize {
        let n = self.state.dimension();
        let (i, u) = if self.kind.uses_uniform() {
            let s = self.noise.next_step(n);
            (s.index, s.uniform)
        } else {
            (self.noise.next_index(n), 0.0)
        };
        self.kind.apply(&mut self.state, i, u);
        self.time += 1;
        i
    }
}
