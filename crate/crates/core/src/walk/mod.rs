//! Hypercube configurations, the heat-bath and flip dynamics, and the shared-noise coupling.

pub mod config;
pub mod dynamics;
pub mod noise;

pub use config::{flip_coordinate, hamming_distance, Configuration};
pub use dynamics::{coupled_step, step, Walker, WalkKind};
pub use noise::{derive_seed, NoiseStream, Step};
