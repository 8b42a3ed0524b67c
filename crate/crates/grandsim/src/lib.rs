//! Campaign machinery behind the `grandsim` binary: code and decoder
//! specification strings, the deterministic Monte-Carlo runner, and CSV
//! output.

pub mod campaign;
pub mod spec;

pub use campaign::{run_campaign, run_sweep, CampaignConfig, CampaignResult, PointStats, SweepConfig};
pub use spec::{CodeSpec, VariantSpec};
