//! Physical configuration: road layout, radio parameters, BS deployment,
//! unit conversions, path loss and exclusion radii.
//!
//! Everything is stored in linear units (meters, watts, ratios, radians).

use crate::association::b_of_r;
use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Reference noise temperature in kelvin.
pub const REFERENCE_TEMPERATURE: f64 = 290.0;

/// Side of the road a base station is mounted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Upper,
    Bottom,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Upper => Side::Bottom,
            Side::Bottom => Side::Upper,
        }
    }

    /// +1 for the upper side, -1 for the bottom side.
    pub fn sign(self) -> f64 {
        match self {
            Side::Upper => 1.0,
            Side::Bottom => -1.0,
        }
    }
}

/// Line-of-sight state of a BS with respect to the user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkState {
    Los,
    Nlos,
}

impl LinkState {
    pub fn other(self) -> LinkState {
        match self {
            LinkState::Los => LinkState::Nlos,
            LinkState::Nlos => LinkState::Los,
        }
    }
}

/// Lane geometry and blockage traffic.
#[derive(Debug, Clone, PartialEq)]
pub struct RoadLayout {
    /// Lane width w in meters.
    pub lane_width: f64,
    /// Blockage density λ_{o,ℓ} (per meter) of each obstacle lane ℓ = 1..N_o,
    /// identical for both driving directions.
    pub lambda_o: Vec<f64>,
    /// Blockage footprint length τ in meters.
    pub tau: f64,
    /// Blockage width in meters, used by the simulator only.
    pub blockage_width: f64,
}

impl RoadLayout {
    /// Lane width 3.7 m, double-decker buses (11.2 m by 2.52 m) and the
    /// densities {1e-2, 2e-2} truncated to `n_obstacle_lanes`.
    pub fn paper_defaults(n_obstacle_lanes: usize) -> Result<Self> {
        let base = [1e-2, 2e-2];
        if n_obstacle_lanes == 0 || n_obstacle_lanes > base.len() {
            return Err(Error::config(
                "road.lambda_o",
                format!("default densities exist for 1 or 2 obstacle lanes, not {n_obstacle_lanes}"),
            ));
        }
        Ok(RoadLayout {
            lane_width: 3.7,
            lambda_o: base[..n_obstacle_lanes].to_vec(),
            tau: 11.2,
            blockage_width: 2.52,
        })
    }

    pub fn n_obstacle_lanes(&self) -> usize {
        self.lambda_o.len()
    }

    /// Distance w(N_o+1) between the user lane axis and each road side.
    pub fn half_width(&self) -> f64 {
        self.lane_width * (self.n_obstacle_lanes() as f64 + 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lane_width > 0.0 && self.lane_width.is_finite()) {
            return Err(Error::config("road.lane_width", "must be positive"));
        }
        if self.lambda_o.is_empty() {
            return Err(Error::config("road.lambda_o", "at least one obstacle lane is required"));
        }
        for (i, l) in self.lambda_o.iter().enumerate() {
            if !(*l >= 0.0 && l.is_finite()) {
                return Err(Error::config(format!("road.lambda_o[{i}]"), "must be non-negative"));
            }
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::config("road.tau", "must be positive"));
        }
        if !(self.blockage_width > 0.0 && self.blockage_width < self.lane_width) {
            return Err(Error::config(
                "road.blockage_width",
                "must be positive and narrower than a lane",
            ));
        }
        Ok(())
    }
}

/// Propagation, antenna and power parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RadioConfig {
    /// Carrier frequency in Hz.
    pub carrier_hz: f64,
    pub alpha_l: f64,
    pub alpha_n: f64,
    /// Path-loss intercepts at 1 m, linear.
    pub c_l: f64,
    pub c_n: f64,
    /// Nakagami shape of the serving link.
    pub m: u32,
    /// Main-lobe beamwidth in radians, shared by BSs and the user.
    pub psi: f64,
    pub g_tx_main: f64,
    pub g_tx_side: f64,
    pub g_rx_main: f64,
    pub g_rx_side: f64,
    pub bandwidth_hz: f64,
    pub p_t_watts: f64,
    /// Thermal noise power normalized by the transmit power.
    pub sigma: f64,
}

impl RadioConfig {
    /// 28 GHz, α_L = 2.8, α_N = 4, m = 3, ψ = 30°, G_TX = 20 dB, G_RX = 10 dB,
    /// side lobes -10 dB, W = 100 MHz, P_t = 27 dBm, T = 290 K.
    pub fn paper_defaults() -> Self {
        let carrier_hz = 28e9;
        let (c_l, c_n) = derive_intercepts(carrier_hz).expect("positive carrier");
        let bandwidth_hz = 100e6;
        let p_t_watts = dbm_to_watts(27.0);
        let sigma = derive_noise(bandwidth_hz, REFERENCE_TEMPERATURE, p_t_watts).expect("positive inputs");
        RadioConfig {
            carrier_hz,
            alpha_l: 2.8,
            alpha_n: 4.0,
            c_l,
            c_n,
            m: 3,
            psi: 30f64.to_radians(),
            g_tx_main: db_to_linear(20.0),
            g_tx_side: db_to_linear(-10.0),
            g_rx_main: db_to_linear(10.0),
            g_rx_side: db_to_linear(-10.0),
            bandwidth_hz,
            p_t_watts,
            sigma,
        }
    }

    pub fn alpha(&self, state: LinkState) -> f64 {
        match state {
            LinkState::Los => self.alpha_l,
            LinkState::Nlos => self.alpha_n,
        }
    }

    pub fn intercept(&self, state: LinkState) -> f64 {
        match state {
            LinkState::Los => self.c_l,
            LinkState::Nlos => self.c_n,
        }
    }

    /// Gain Δ₁ = G_TX·G_RX of the aligned serving link.
    pub fn serving_gain(&self) -> f64 {
        self.g_tx_main * self.g_rx_main
    }

    pub fn validate(&self, layout: &RoadLayout) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.carrier_hz) {
            return Err(Error::config("radio.carrier_hz", "must be positive"));
        }
        if !(self.alpha_l > 1.0 && self.alpha_l.is_finite()) {
            return Err(Error::config("radio.alpha_l", "must exceed 1"));
        }
        if !(self.alpha_n >= self.alpha_l && self.alpha_n.is_finite()) {
            return Err(Error::config("radio.alpha_n", "must be at least alpha_l"));
        }
        if !positive(self.c_l) {
            return Err(Error::config("radio.c_l", "must be positive"));
        }
        if !positive(self.c_n) {
            return Err(Error::config("radio.c_n", "must be positive"));
        }
        if self.m < 1 {
            return Err(Error::config("radio.m", "must be a positive integer"));
        }
        if !(self.psi > 0.0 && self.psi < std::f64::consts::PI) {
            return Err(Error::config("radio.psi", "must lie in (0, 180) degrees"));
        }
        if !(positive(self.g_tx_side) && self.g_tx_main > self.g_tx_side && self.g_tx_main.is_finite()) {
            return Err(Error::config("radio.g_tx", "need G_TX > g_TX > 0"));
        }
        if !(positive(self.g_rx_side) && self.g_rx_main > self.g_rx_side && self.g_rx_main.is_finite()) {
            return Err(Error::config("radio.g_rx", "need G_RX > g_RX > 0"));
        }
        if !positive(self.bandwidth_hz) {
            return Err(Error::config("radio.bandwidth_hz", "must be positive"));
        }
        if !positive(self.p_t_watts) {
            return Err(Error::config("radio.p_t", "must be positive"));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::config("radio.sigma", "must be non-negative"));
        }
        let h = layout.half_width();
        let needed = self.c_l.powf(1.0 / self.alpha_l).max(self.c_n.powf(1.0 / self.alpha_n));
        if h < needed {
            return Err(Error::config(
                "radio.c_l/c_n",
                format!("road half-width {h} m is below max(C_L^(1/α_L), C_N^(1/α_N)) = {needed} m, path loss would exceed unity"),
            ));
        }
        Ok(())
    }
}

/// BS linear density and side assignment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeploymentConfig {
    /// BS density per meter of road.
    pub lambda_bs: f64,
    /// Probability of the upper side; only 0.5 is supported.
    pub q: f64,
}

impl DeploymentConfig {
    pub fn new(lambda_bs: f64) -> Self {
        DeploymentConfig { lambda_bs, q: 0.5 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_bs > 0.0 && self.lambda_bs.is_finite()) {
            return Err(Error::config("deployment.lambda_bs", "must be positive"));
        }
        if self.q != 0.5 {
            return Err(Error::config(
                "deployment.q",
                format!("only q = 0.5 is supported, got {}", self.q),
            ));
        }
        Ok(())
    }

    pub fn densities(&self, layout: &RoadLayout) -> Densities {
        let p_l = los_probability(layout);
        let lambda_l = p_l * self.lambda_bs;
        Densities {
            p_l,
            p_n: 1.0 - p_l,
            lambda_l,
            lambda_n: self.lambda_bs - lambda_l,
        }
    }
}

/// LOS/NLOS thinning of the BS process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Densities {
    pub p_l: f64,
    pub p_n: f64,
    pub lambda_l: f64,
    pub lambda_n: f64,
}

impl Densities {
    pub fn lambda(&self, state: LinkState) -> f64 {
        match state {
            LinkState::Los => self.lambda_l,
            LinkState::Nlos => self.lambda_n,
        }
    }
}

/// A validated combination of layout, radio and deployment.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub layout: RoadLayout,
    pub radio: RadioConfig,
    pub deployment: DeploymentConfig,
}

impl Scenario {
    pub fn new(layout: RoadLayout, radio: RadioConfig, deployment: DeploymentConfig) -> Result<Self> {
        let s = Scenario {
            layout,
            radio,
            deployment,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn paper_defaults(n_obstacle_lanes: usize, lambda_bs: f64) -> Result<Self> {
        Scenario::new(
            RoadLayout::paper_defaults(n_obstacle_lanes)?,
            RadioConfig::paper_defaults(),
            DeploymentConfig::new(lambda_bs),
        )
    }

    pub fn validate(&self) -> Result<()> {
        self.layout.validate()?;
        self.radio.validate(&self.layout)?;
        self.deployment.validate()
    }

    pub fn densities(&self) -> Densities {
        self.deployment.densities(&self.layout)
    }

    pub fn half_width(&self) -> f64 {
        self.layout.half_width()
    }
}

/// Descriptor of the serving BS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServingLink {
    pub side: Side,
    pub los: LinkState,
    /// Distance to the user.
    pub r1: f64,
    /// Abscissa along the road, signed.
    pub x1: f64,
    /// Δ₁ = G_TX·G_RX.
    pub delta1: f64,
}

impl ServingLink {
    /// Link at distance `r1`, placed at a non-negative abscissa.
    pub fn at_distance(side: Side, los: LinkState, r1: f64, scenario: &Scenario) -> Result<Self> {
        let x1 = b_of_r(r1, &scenario.layout)?;
        Ok(ServingLink {
            side,
            los,
            r1,
            x1,
            delta1: scenario.radio.serving_gain(),
        })
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w) + 30.0
}

/// Free-space intercepts C_L = C_N = (c / (4πf))² at 1 m.
pub fn derive_intercepts(carrier_hz: f64) -> Result<(f64, f64)> {
    if !(carrier_hz > 0.0 && carrier_hz.is_finite()) {
        return Err(Error::domain(
            "derive_intercepts",
            format!("frequency must be positive, got {carrier_hz}"),
        ));
    }
    let c = (SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * carrier_hz)).powi(2);
    Ok((c, c))
}

/// Noise power k·T·W normalized by the transmit power.
pub fn derive_noise(bandwidth_hz: f64, temperature_k: f64, p_t_watts: f64) -> Result<f64> {
    if !(bandwidth_hz > 0.0 && temperature_k > 0.0 && p_t_watts > 0.0) {
        return Err(Error::domain(
            "derive_noise",
            format!("bandwidth, temperature and power must be positive ({bandwidth_hz}, {temperature_k}, {p_t_watts})"),
        ));
    }
    Ok(BOLTZMANN * temperature_k * bandwidth_hz / p_t_watts)
}

/// Probability p_L = exp(-τ Σ λ_{o,ℓ}) that a BS is in LOS.
pub fn los_probability(layout: &RoadLayout) -> f64 {
    let total: f64 = layout.lambda_o.iter().sum();
    (-layout.tau * total).exp()
}

/// Linear attenuation C_E·r^{-α_E}.
pub fn path_loss(r: f64, state: LinkState, radio: &RadioConfig, layout: &RoadLayout) -> Result<f64> {
    let h = layout.half_width();
    if !(r >= h) {
        return Err(Error::domain(
            "path_loss",
            format!("distance {r} m is below the road half-width {h} m"),
        ));
    }
    Ok(radio.intercept(state) * r.powf(-radio.alpha(state)))
}

/// Smallest distance A_L(r) of a LOS BS given a NLOS serving BS at distance r.
pub fn exclusion_radius_l(r: f64, radio: &RadioConfig, layout: &RoadLayout) -> f64 {
    let equiv = (radio.c_l / radio.c_n).powf(1.0 / radio.alpha_l) * r.powf(radio.alpha_n / radio.alpha_l);
    equiv.max(layout.half_width())
}

/// Smallest distance A_N(r) of a NLOS BS given a LOS serving BS at distance r.
pub fn exclusion_radius_n(r: f64, radio: &RadioConfig, layout: &RoadLayout) -> f64 {
    let equiv = (radio.c_n / radio.c_l).powf(1.0 / radio.alpha_n) * r.powf(radio.alpha_l / radio.alpha_n);
    equiv.max(layout.half_width())
}
