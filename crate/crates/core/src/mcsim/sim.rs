use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use rayon::prelude::*;
use std::f64::consts::PI;

use super::estimate::{Estimate, Z_98};
use super::geometry::{wrap_rel, LaneIndex};
use super::traffic::{KraussParams, Lane, Traffic};
use crate::error::{Error, Result};
use crate::scenario::{LinkState, Scenario, Side};

/// How small-scale fading is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FadingMode {
    /// Unit-mean Nakagami-m on the serving link, unit-mean Rayleigh elsewhere.
    #[default]
    Random,
    /// All power gains fixed to 1.
    Unit,
}

/// Shape of an obstacle-lane vehicle for occlusion tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Occlusion {
    /// τ × blockage_width rectangle centered on the lane axis.
    #[default]
    Rectangle,
    /// Zero-width footprint segment of length τ on the lane axis.
    Footprint,
}

/// Support of the interferer steering angle, measured from the road side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SteeringSupport {
    /// Uniform on [ψ/2, 2π - ψ/2].
    #[default]
    Full,
    /// Uniform on [ψ/2, π - ψ/2]: beams always point across the road.
    RoadFacing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Half length R of the simulated ring road, m.
    pub half_length: f64,
    /// Target accuracy ε of the radius rule R ≥ ε^(-1/(α_L - 1)).
    pub epsilon: f64,
    /// Raise R to the radius rule when it is too short; otherwise only warn.
    pub enforce_radius_rule: bool,
    pub n_trials: usize,
    pub snapshots_per_trial: usize,
    /// Time between snapshots, s.
    pub snapshot_dt: f64,
    /// Mobility time discarded before the first snapshot, s.
    pub warmup: f64,
    /// Mobility integration step, s.
    pub dt: f64,
    pub seed: u64,
    /// User-lane vehicle density, 1/m.
    pub lambda_u: f64,
    /// Maximum speed in the user lanes, m/s.
    pub v_max_user: f64,
    /// Maximum speed in the obstacle lanes, m/s.
    pub v_max_blockage: f64,
    pub accel: f64,
    pub decel: f64,
    /// Krauss speed-noise factor.
    pub krauss_sigma: f64,
    pub user_vehicle_length: f64,
    pub fading: FadingMode,
    pub steering: SteeringSupport,
    pub occlusion: Occlusion,
    /// Normal quantile of the confidence interval.
    pub z: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            half_length: 10_000.0,
            epsilon: 1e-7,
            enforce_radius_rule: true,
            n_trials: 50,
            snapshots_per_trial: 300,
            snapshot_dt: 2.0,
            warmup: 60.0,
            dt: 0.1,
            seed: 1,
            lambda_u: 2e-2,
            v_max_user: 112.0 / 3.6,
            v_max_blockage: 96.0 / 3.6,
            accel: 5.3,
            decel: 5.3,
            krauss_sigma: 0.5,
            user_vehicle_length: 4.5,
            fading: FadingMode::Random,
            steering: SteeringSupport::Full,
            occlusion: Occlusion::Rectangle,
            z: Z_98,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("half_length", self.half_length),
            ("epsilon", self.epsilon),
            ("snapshot_dt", self.snapshot_dt),
            ("dt", self.dt),
            ("v_max_user", self.v_max_user),
            ("v_max_blockage", self.v_max_blockage),
            ("accel", self.accel),
            ("decel", self.decel),
            ("user_vehicle_length", self.user_vehicle_length),
            ("z", self.z),
        ];
        for (field, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(field, format!("must be positive and finite, got {v}")));
            }
        }
        if self.n_trials == 0 {
            return Err(Error::config("n_trials", "must be at least 1"));
        }
        if self.snapshots_per_trial == 0 {
            return Err(Error::config("snapshots_per_trial", "must be at least 1"));
        }
        if !(self.warmup >= 0.0) || !(self.lambda_u >= 0.0) {
            return Err(Error::config("warmup/lambda_u", "must be non-negative"));
        }
        if !(0.0..=1.0).contains(&self.krauss_sigma) {
            return Err(Error::config("krauss_sigma", "must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Smallest half length satisfying the radius rule.
    pub fn min_half_length(&self, alpha_l: f64) -> f64 {
        self.epsilon.powf(-1.0 / (alpha_l - 1.0))
    }

    /// Half length used by the simulator after applying the radius rule.
    pub fn effective_half_length(&self, alpha_l: f64) -> f64 {
        let min = self.min_half_length(alpha_l);
        if self.half_length >= min {
            return self.half_length;
        }
        if self.enforce_radius_rule {
            log::warn!(
                "half length {} m below radius rule, raised to {min:.1} m",
                self.half_length
            );
            min
        } else {
            log::warn!(
                "half length {} m below radius rule minimum {min:.1} m",
                self.half_length
            );
            self.half_length
        }
    }

    pub fn krauss(&self) -> KraussParams {
        KraussParams {
            accel: self.accel,
            decel: self.decel,
            sigma: self.krauss_sigma,
            reaction: self.dt,
        }
    }

    fn steps(&self, seconds: f64) -> usize {
        (seconds / self.dt).round() as usize
    }
}

/// Base station with its interferer steering angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseStation {
    pub x: f64,
    pub side: Side,
    /// Angle between the road side and the boresight, rad.
    pub steering: f64,
}

/// A vehicle at snapshot time. `lane` is 0 for the user lane and ±ℓ for
/// obstacle lane ℓ on the upper/bottom half of the road.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vehicle {
    pub lane: i32,
    pub x: f64,
    pub v: f64,
    pub length: f64,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub bs_list: Vec<BaseStation>,
    pub vehicles: Vec<Vehicle>,
    pub user_x: f64,
    pub road_length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrSample {
    pub sinr: f64,
    pub serving_side: Side,
    pub serving_los: bool,
    pub serving_distance: f64,
}

/// One recorded snapshot of a trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotRecord {
    pub trial: u32,
    pub time: f64,
    pub sinr: f64,
    pub serving_side: Side,
    pub serving_los: bool,
}

/// Exactly ⌊2Rλ⌋ points uniform on [-R, R).
pub fn sample_ppp_1d<R: Rng>(lambda: f64, half_length: f64, rng: &mut R) -> Vec<f64> {
    let n = (2.0 * half_length * lambda).floor().max(0.0) as usize;
    (0..n)
        .map(|_| half_length * (2.0 * rng.random::<f64>() - 1.0))
        .collect()
}

fn draw_steering<R: Rng>(support: SteeringSupport, psi: f64, rng: &mut R) -> f64 {
    let upper = match support {
        SteeringSupport::Full => 2.0 * PI,
        SteeringSupport::RoadFacing => PI,
    };
    0.5 * psi + rng.random::<f64>() * (upper - psi)
}

fn angle_between(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Global boresight direction of a BS beam.
fn boresight(side: Side, steering: f64) -> f64 {
    match side {
        Side::Upper => -steering,
        Side::Bottom => steering,
    }
}

/// SINR at the user for one snapshot; `None` when there is no BS.
pub fn snapshot_sinr<R: Rng>(snap: &Snapshot, sc: &Scenario, cfg: &SimConfig, rng: &mut R) -> Option<SinrSample> {
    if snap.bs_list.is_empty() {
        return None;
    }
    let layout = &sc.layout;
    let radio = &sc.radio;
    let h = sc.half_width();
    let w = layout.lane_width;

    let n_lanes = layout.n_obstacle_lanes() as i32;
    let lanes: Vec<LaneIndex> = (-n_lanes..=n_lanes)
        .filter(|&l| l != 0)
        .map(|l| {
            let xs = snap
                .vehicles
                .iter()
                .filter(|v| v.lane == l)
                .map(|v| wrap_rel(v.x, snap.user_x, snap.road_length))
                .collect();
            LaneIndex::new(l as f64 * w, xs)
        })
        .collect();
    let half_len = 0.5 * layout.tau;
    let half_w = match cfg.occlusion {
        Occlusion::Rectangle => 0.5 * layout.blockage_width,
        Occlusion::Footprint => 0.0,
    };

    struct Link {
        dx: f64,
        y: f64,
        r: f64,
        los: bool,
        ell: f64,
    }
    let links: Vec<Link> = snap
        .bs_list
        .iter()
        .map(|bs| {
            let dx = wrap_rel(bs.x, snap.user_x, snap.road_length);
            let y = bs.side.sign() * h;
            let r = dx.hypot(y);
            let los = !lanes
                .iter()
                .any(|lane| lane.y.signum() == y.signum() && lane.blocks(dx, y, half_len, half_w));
            let state = if los { LinkState::Los } else { LinkState::Nlos };
            let ell = radio.intercept(state) * r.powf(-radio.alpha(state));
            Link { dx, y, r, los, ell }
        })
        .collect();

    let serving = links
        .iter()
        .enumerate()
        .fold(0, |best, (i, l)| if l.ell > links[best].ell { i } else { best });
    let s = &links[serving];
    let user_beam = s.y.atan2(s.dx);

    let mut interference = 0.0;
    for (j, (link, bs)) in links.iter().zip(&snap.bs_list).enumerate() {
        if j == serving {
            continue;
        }
        let rx_main = angle_between(link.y.atan2(link.dx), user_beam) <= 0.5 * radio.psi;
        let towards_user = (-link.y).atan2(-link.dx);
        let tx_main = angle_between(towards_user, boresight(bs.side, bs.steering)) <= 0.5 * radio.psi;
        let g_rx = if rx_main { radio.g_rx_main } else { radio.g_rx_side };
        let g_tx = if tx_main { radio.g_tx_main } else { radio.g_tx_side };
        let fade = match cfg.fading {
            FadingMode::Random => Exp1.sample(rng),
            FadingMode::Unit => 1.0,
        };
        interference += fade * g_tx * g_rx * link.ell;
    }
    let h1 = match cfg.fading {
        FadingMode::Random => {
            let m = radio.m as f64;
            Gamma::new(m, 1.0 / m).expect("m ≥ 1").sample(rng)
        }
        FadingMode::Unit => 1.0,
    };
    let signal = h1 * radio.serving_gain() * s.ell;
    Some(SinrSample {
        sinr: signal / (radio.sigma + interference),
        serving_side: snap.bs_list[serving].side,
        serving_los: s.los,
        serving_distance: s.r,
    })
}

/// Builds the lanes of the ring road and places vehicles at random. The user
/// is vehicle 0 of the user lane, which travels towards -x.
pub fn init_traffic<R: Rng>(sc: &Scenario, cfg: &SimConfig, road_length: f64, rng: &mut R) -> Traffic {
    let layout = &sc.layout;
    let w = layout.lane_width;
    let mut user_lane = Lane::empty(0.0, -1.0, cfg.v_max_user, cfg.user_vehicle_length, false);
    let n_user = ((road_length * cfg.lambda_u).floor() as usize).max(1);
    user_lane.populate(n_user, road_length, rng);
    let mut lanes = vec![user_lane];
    for (i, &lambda) in layout.lambda_o.iter().enumerate() {
        let l = (i + 1) as f64;
        let count = (road_length * lambda).floor() as usize;
        // Lanes below the user lane share its direction.
        for (y, dir) in [(l * w, 1.0), (-l * w, -1.0)] {
            let mut lane = Lane::empty(y, dir, cfg.v_max_blockage, layout.tau, true);
            lane.populate(count, road_length, rng);
            lanes.push(lane);
        }
    }
    Traffic {
        road_length,
        lanes,
        user_lane: 0,
        user_index: 0,
        params: cfg.krauss(),
    }
}

/// Obstacle-lane vehicles of the current traffic state.
pub fn blocking_vehicles(traffic: &Traffic, layout_width: f64, blockage_width: f64) -> Vec<Vehicle> {
    let mut out = Vec::new();
    for lane in traffic.lanes.iter().filter(|l| l.blocking) {
        let index = (lane.y / layout_width).round() as i32;
        for i in 0..lane.len() {
            out.push(Vehicle {
                lane: index,
                x: lane.global_x(i, traffic.road_length),
                v: lane.v[i],
                length: lane.vehicle_length,
                width: blockage_width,
            });
        }
    }
    out
}

pub(crate) fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub(crate) fn place_bss<R: Rng>(sc: &Scenario, half_length: f64, rng: &mut R) -> Vec<BaseStation> {
    sample_ppp_1d(sc.deployment.lambda_bs, half_length, rng)
        .into_iter()
        .map(|x| BaseStation {
            x,
            side: if rng.random_bool(0.5) {
                Side::Upper
            } else {
                Side::Bottom
            },
            steering: 0.0,
        })
        .collect()
}

// Independent stream for `role` within `trial`. Role 0 drives the traffic and
// role 1 + j the base stations and fading of the j-th scenario of a batch.
fn stream_rng(seed: u64, role: u64, trial: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&role.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial as u64);
    rng
}

/// Runs one independent trial and returns its snapshots.
pub fn run_trial(sc: &Scenario, cfg: &SimConfig, trial: usize) -> Vec<SnapshotRecord> {
    run_trial_batch(std::slice::from_ref(sc), cfg, trial)
        .pop()
        .unwrap_or_default()
}

/// One trial in which every scenario sees the same traffic. Each scenario
/// has its own base stations, steering and fading draws.
pub fn run_trial_batch(scs: &[Scenario], cfg: &SimConfig, trial: usize) -> Vec<Vec<SnapshotRecord>> {
    let Some(first) = scs.first() else {
        return Vec::new();
    };
    let mut traffic_rng = stream_rng(cfg.seed, 0, trial);
    let mut radio_rngs: Vec<ChaCha8Rng> = (0..scs.len())
        .map(|j| stream_rng(cfg.seed, 1 + j as u64, trial))
        .collect();
    let half_length = cfg.effective_half_length(first.radio.alpha_l);
    let road_length = 2.0 * half_length;
    let mut bss: Vec<Vec<BaseStation>> = scs
        .iter()
        .zip(&mut radio_rngs)
        .map(|(sc, rng)| place_bss(sc, half_length, rng))
        .collect();
    let mut traffic = init_traffic(first, cfg, road_length, &mut traffic_rng);
    for _ in 0..cfg.steps(cfg.warmup) {
        traffic.step(cfg.dt, &mut traffic_rng);
    }
    let between = cfg.steps(cfg.snapshot_dt).max(1);
    let mut out = vec![Vec::with_capacity(cfg.snapshots_per_trial); scs.len()];
    let layout = &first.layout;
    for k in 0..cfg.snapshots_per_trial {
        let vehicles = blocking_vehicles(&traffic, layout.lane_width, layout.blockage_width);
        let time = cfg.warmup + k as f64 * cfg.snapshot_dt;
        for (j, sc) in scs.iter().enumerate() {
            let rng = &mut radio_rngs[j];
            for bs in &mut bss[j] {
                bs.steering = draw_steering(cfg.steering, sc.radio.psi, rng);
            }
            let snap = Snapshot {
                bs_list: bss[j].clone(),
                vehicles: vehicles.clone(),
                user_x: traffic.user_x(),
                road_length,
            };
            if let Some(sample) = snapshot_sinr(&snap, sc, cfg, rng) {
                out[j].push(SnapshotRecord {
                    trial: trial as u32,
                    time,
                    sinr: sample.sinr,
                    serving_side: sample.serving_side,
                    serving_los: sample.serving_los,
                });
            }
        }
        if k + 1 < cfg.snapshots_per_trial {
            for _ in 0..between {
                traffic.step(cfg.dt, &mut traffic_rng);
            }
        }
    }
    out
}

/// All snapshots of all trials, from which any number of estimates can be
/// drawn.
#[derive(Debug, Clone)]
pub struct SimOutput {
    pub records: Vec<SnapshotRecord>,
    pub n_trials: usize,
    pub z: f64,
    pub bandwidth_hz: f64,
}

impl SimOutput {
    fn estimate(&self, hit: impl Fn(&SnapshotRecord) -> bool) -> Estimate {
        let k = self.records.iter().filter(|r| hit(r)).count();
        Estimate::from_counts(k as u64, self.records.len() as u64, self.z)
    }

    /// Fraction of snapshots with SINR below θ.
    pub fn outage(&self, theta: f64) -> Estimate {
        self.estimate(|r| r.sinr < theta)
    }

    /// Fraction of snapshots with rate W log₂(1 + SINR) of at least κ.
    pub fn rate_coverage(&self, kappa: f64) -> Estimate {
        self.estimate(|r| self.bandwidth_hz * r.sinr.ln_1p() / std::f64::consts::LN_2 >= kappa)
    }

    /// Fraction of snapshots served in LOS.
    pub fn association(&self) -> Estimate {
        self.estimate(|r| r.serving_los)
    }

    /// Per-trial (outage count, snapshot count).
    pub fn trial_counts(&self, theta: f64) -> Vec<(u64, u64)> {
        let mut counts = vec![(0u64, 0u64); self.n_trials];
        for r in &self.records {
            let c = &mut counts[r.trial as usize];
            c.1 += 1;
            if r.sinr < theta {
                c.0 += 1;
            }
        }
        counts
    }
}

/// Runs all trials in parallel. Results do not depend on the thread count.
pub fn simulate(sc: &Scenario, cfg: &SimConfig) -> Result<SimOutput> {
    Ok(simulate_batch(std::slice::from_ref(sc), cfg)?.remove(0))
}

/// Simulates several scenarios over shared traffic, which is much cheaper
/// than separate runs when only the base stations or antennas differ. The
/// scenarios must share the road layout and α_L. Outputs follow input order.
pub fn simulate_batch(scs: &[Scenario], cfg: &SimConfig) -> Result<Vec<SimOutput>> {
    cfg.validate()?;
    let Some(first) = scs.first() else {
        return Err(Error::config("scenarios", "at least one scenario is required"));
    };
    for sc in scs {
        sc.validate()?;
        if sc.layout != first.layout || sc.radio.alpha_l != first.radio.alpha_l {
            return Err(Error::config(
                "scenarios",
                "batched scenarios must share the road layout and alpha_L",
            ));
        }
    }
    let per_trial: Vec<Vec<Vec<SnapshotRecord>>> = (0..cfg.n_trials)
        .into_par_iter()
        .map(|t| run_trial_batch(scs, cfg, t))
        .collect();
    let mut outputs: Vec<SimOutput> = scs
        .iter()
        .map(|sc| SimOutput {
            records: Vec::new(),
            n_trials: cfg.n_trials,
            z: cfg.z,
            bandwidth_hz: sc.radio.bandwidth_hz,
        })
        .collect();
    for trial in per_trial {
        for (out, records) in outputs.iter_mut().zip(trial) {
            out.records.extend(records);
        }
    }
    Ok(outputs)
}

pub fn estimate_outage(theta: f64, sc: &Scenario, cfg: &SimConfig) -> Result<Estimate> {
    Ok(simulate(sc, cfg)?.outage(theta))
}

pub fn estimate_rate_coverage(kappa: f64, sc: &Scenario, cfg: &SimConfig) -> Result<Estimate> {
    Ok(simulate(sc, cfg)?.rate_coverage(kappa))
}

pub fn estimate_association(sc: &Scenario, cfg: &SimConfig) -> Result<Estimate> {
    Ok(simulate(sc, cfg)?.association())
}
