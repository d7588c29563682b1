//! Synthetic proximity traces from mobility models.

mod bursty;
mod config;
mod contacts;
mod sampler;
mod walk;

pub use bursty::{bursty_trace, BurstyConfig};
pub use config::{Area, MobilityConfig, Model, RwpParams, SpeedCoupling, TlwParams};
pub use contacts::{generate_contacts, trajectories_to_contacts};
pub use sampler::sample_truncated_power_law;
pub use walk::{
    node_rng, reflect, simulate, simulate_rwp, simulate_rwp_detailed, simulate_tlw, simulate_tlw_detailed, Flight,
    MobilityRun, Sample, Trajectory,
};
