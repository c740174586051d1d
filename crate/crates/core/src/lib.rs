//! Random walks on the hypercube `{-1,+1}^N`: samplers for coupling, self-return,
//! set-return and random-environment hitting times, exact small-N references,
//! and the statistics used to compare them.

pub mod error;
pub mod exact;
pub mod harness;
pub mod par;
pub mod stats;
pub mod stopping;
pub mod walk;

pub use error::{Error, Result};
pub use par::{map_indexed, Execution};
pub use stopping::Observation;
pub use walk::{Configuration, NoiseStream, WalkKind};
