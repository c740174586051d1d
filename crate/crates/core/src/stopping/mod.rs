//! Stopping-time experiments on the hypercube walks.
//!
//! Every search that could run unboundedly takes an explicit horizon and
//! reports [`Observation::Censored`] instead of looping forever.

pub mod coupling;
pub mod environment;
pub mod excursion;
pub mod pattern;
pub mod self_return;
pub mod set_return;

use serde::{Deserialize, Serialize};

pub use coupling::{
    coupled_meeting_time, coupling_time_direct, coupling_time_direct_capped,
    coupling_time_geometric, CouplingSample,
};
pub use environment::{environment_member, random_set_hit, HitSample, RandomEnvironment};
pub use excursion::{zero_before_return, ExcursionTally};
pub use pattern::{is_in_j, min_gamma, scan_first_gamma, PatternWindow};
pub use self_return::{distinct_prefix_points, self_return, self_return_from_indices, SelfReturnSample};
pub use set_return::{
    beta_sandwich, disjoint_segments_probability, estimate_beta, fixed_set_return,
    prefix_length, prefix_return, prefix_return_with, reflected_segments_probability,
    segments_disjoint, tail_profile, SetReturnOptions, SetReturnSample, TailProfile,
};

/// A stopping time observed within its horizon, or censored at the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observation {
    Observed(u64),
    Censored { horizon: u64 },
}

impl Observation {
    pub fn value(self) -> Option<u64> {
        match self {
            Observation::Observed(t) => Some(t),
            Observation::Censored { .. } => None,
        }
    }

    pub fn is_censored(self) -> bool {
        matches!(self, Observation::Censored { .. })
    }

    /// The observed time, or the horizon when censored.
    pub fn raw(self) -> u64 {
        match self {
            Observation::Observed(t) => t,
            Observation::Censored { horizon } => horizon,
        }
    }
}

/// `floor(x)` as a step count, saturating at `u64::MAX`.
pub(crate) fn floor_steps(x: f64) -> u64 {
    if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        x.max(0.0).floor() as u64
    }
}

pub(crate) fn check_gamma(gamma: f64) -> crate::Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(crate::Error::invalid(format!(
            "exponent gamma must lie in (0,1), got {gamma}"
        )));
    }
    Ok(())
}
