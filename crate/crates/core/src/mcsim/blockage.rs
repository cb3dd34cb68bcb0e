use rand::Rng;
use rayon::prelude::*;

use super::geometry::{wrap_rel, LaneIndex};
use super::sim::{init_traffic, place_bss, trial_rng, BaseStation, SimConfig};
use super::traffic::Traffic;
use crate::error::Result;
use crate::scenario::{RoadLayout, Scenario, Side};

/// Which ray is tracked on each side of the road.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RayMode {
    /// Ray to the nearest BS on that side.
    #[default]
    NearestBs,
    /// Ray perpendicular to the road, as towards a co-moving BS abeam.
    Perpendicular,
}

/// Occlusion counters for one side of the road.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SideCounts {
    pub occluded_steps: u64,
    pub steps: u64,
    /// Sum of completed event durations, s.
    pub event_time: f64,
    pub events: u64,
}

impl SideCounts {
    fn merge(&mut self, o: &SideCounts) {
        self.occluded_steps += o.occluded_steps;
        self.steps += o.steps;
        self.event_time += o.event_time;
        self.events += o.events;
    }

    pub fn occluded_fraction(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.occluded_steps as f64 / self.steps as f64
        }
    }

    /// Mean duration of completed events, 0 when none completed.
    pub fn mean_duration(&self) -> f64 {
        if self.events == 0 {
            0.0
        } else {
            self.event_time / self.events as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlockageStats {
    pub upper: SideCounts,
    pub bottom: SideCounts,
}

impl BlockageStats {
    fn merge(mut self, o: &BlockageStats) -> Self {
        self.upper.merge(&o.upper);
        self.bottom.merge(&o.bottom);
        self
    }

    /// Fraction of time a side's tracked ray is occluded, averaged over sides.
    pub fn event_probability(&self) -> f64 {
        0.5 * (self.upper.occluded_fraction() + self.bottom.occluded_fraction())
    }

    /// Mean duration over the completed events of both sides, s.
    pub fn mean_duration(&self) -> f64 {
        let n = self.upper.events + self.bottom.events;
        if n == 0 {
            0.0
        } else {
            (self.upper.event_time + self.bottom.event_time) / n as f64
        }
    }
}

fn side_occluded(traffic: &Traffic, layout: &RoadLayout, h: f64, side: Side, bx: f64) -> bool {
    let user_x = traffic.user_x();
    let y = side.sign() * h;
    traffic
        .lanes
        .iter()
        .filter(|l| l.blocking && l.y.signum() == y.signum())
        .any(|lane| {
            let xs = (0..lane.len())
                .map(|i| wrap_rel(lane.global_x(i, traffic.road_length), user_x, traffic.road_length))
                .collect();
            LaneIndex::new(lane.y, xs).blocks(bx, y, 0.5 * layout.tau, 0.5 * layout.blockage_width)
        })
}

fn nearest_offset(bss: &[BaseStation], side: Side, user_x: f64, road_length: f64) -> Option<f64> {
    bss.iter()
        .filter(|b| b.side == side)
        .map(|b| wrap_rel(b.x, user_x, road_length))
        .min_by(|a, b| a.abs().total_cmp(&b.abs()))
}

/// Steps the traffic for `steps` steps of `dt` and records per-side
/// occlusion of the tracked rays. Events already running at the first step
/// or still running at the end are censored and not counted as events.
pub fn track_occlusion<R: Rng>(
    traffic: &mut Traffic,
    bss: &[BaseStation],
    layout: &RoadLayout,
    steps: usize,
    dt: f64,
    mode: RayMode,
    rng: &mut R,
) -> BlockageStats {
    let h = layout.half_width();
    let mut stats = BlockageStats::default();
    // Current run per side: None if censored at the start.
    let mut run: [Option<f64>; 2] = [None, None];
    let mut prev = [true, true];
    for k in 0..steps {
        for (idx, side) in [Side::Upper, Side::Bottom].into_iter().enumerate() {
            let bx = match mode {
                RayMode::Perpendicular => Some(0.0),
                RayMode::NearestBs => nearest_offset(bss, side, traffic.user_x(), traffic.road_length),
            };
            let Some(bx) = bx else { continue };
            let occluded = side_occluded(traffic, layout, h, side, bx);
            let counts = match side {
                Side::Upper => &mut stats.upper,
                Side::Bottom => &mut stats.bottom,
            };
            counts.steps += 1;
            if occluded {
                counts.occluded_steps += 1;
                if k == 0 {
                    run[idx] = None;
                } else if !prev[idx] {
                    run[idx] = Some(dt);
                } else if let Some(t) = run[idx].as_mut() {
                    *t += dt;
                }
            } else if prev[idx] && k > 0 {
                if let Some(t) = run[idx].take() {
                    counts.event_time += t;
                    counts.events += 1;
                }
            }
            prev[idx] = occluded;
        }
        traffic.step(dt, rng);
    }
    stats
}

/// Runs independent trials of random traffic and tracks per-side occlusion
/// of the ray selected by `mode` over the snapshot horizon of `cfg`.
pub fn blockage_event_stats(sc: &Scenario, cfg: &SimConfig, mode: RayMode) -> Result<BlockageStats> {
    sc.validate()?;
    cfg.validate()?;
    let half_length = cfg.effective_half_length(sc.radio.alpha_l);
    let steps = ((cfg.snapshots_per_trial as f64 * cfg.snapshot_dt) / cfg.dt).round() as usize;
    let warmup = (cfg.warmup / cfg.dt).round() as usize;
    let per_trial: Vec<BlockageStats> = (0..cfg.n_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let bss = place_bss(sc, half_length, &mut rng);
            let mut traffic = init_traffic(sc, cfg, 2.0 * half_length, &mut rng);
            for _ in 0..warmup {
                traffic.step(cfg.dt, &mut rng);
            }
            track_occlusion(&mut traffic, &bss, &sc.layout, steps, cfg.dt, mode, &mut rng)
        })
        .collect();
    Ok(per_trial.iter().fold(BlockageStats::default(), |acc, s| acc.merge(s)))
}
