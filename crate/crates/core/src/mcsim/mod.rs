//! Event-level Monte Carlo simulator: ring-road traffic with Krauss car
//! following, rectangle occlusion, sectored beams and fading.

mod blockage;
mod estimate;
mod geometry;
mod sim;
mod traffic;

pub use blockage::{blockage_event_stats, track_occlusion, BlockageStats, RayMode, SideCounts};
pub use estimate::{Estimate, Z_98};
pub use geometry::{is_los, segment_hits_rect, wrap_rel, Blocker, LaneIndex, Rect};
pub use sim::{
    blocking_vehicles, estimate_association, estimate_outage, estimate_rate_coverage, init_traffic, run_trial,
    run_trial_batch, sample_ppp_1d, simulate, simulate_batch, snapshot_sinr, BaseStation, FadingMode, Occlusion,
    SimConfig, SimOutput, SinrSample, Snapshot, SnapshotRecord, SteeringSupport, Vehicle,
};
pub use traffic::{krauss_speed, KraussParams, Lane, Traffic};
