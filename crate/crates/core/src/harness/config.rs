use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::coverage::Variant;
use crate::error::{Error, Result};
use crate::mcsim::{FadingMode, Occlusion, SimConfig, SteeringSupport, Z_98};
use crate::scenario::{
    db_to_linear, dbm_to_watts, derive_intercepts, derive_noise, DeploymentConfig, RadioConfig, RoadLayout, Scenario,
    REFERENCE_TEMPERATURE,
};

/// Road geometry and obstacle traffic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoadSection {
    pub lane_width_m: f64,
    /// Blockage density of each obstacle lane, 1/m.
    pub lambda_o: Vec<f64>,
    pub tau_m: f64,
    pub blockage_width_m: f64,
}

/// Radio parameters in engineering units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioSection {
    pub carrier_hz: f64,
    pub alpha_l: f64,
    pub alpha_n: f64,
    /// Overrides the free-space LOS intercept.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intercept_l_db: Option<f64>,
    /// Overrides the free-space NLOS intercept.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intercept_n_db: Option<f64>,
    pub nakagami_m: u32,
    pub beamwidth_deg: f64,
    pub g_tx_main_db: f64,
    pub g_tx_side_db: f64,
    pub g_rx_main_db: f64,
    pub g_rx_side_db: f64,
    pub bandwidth_hz: f64,
    pub p_t_dbm: f64,
    pub temperature_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeploymentSection {
    /// BS density, 1/m.
    pub lambda_bs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FadingName {
    Random,
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SteeringName {
    Full,
    RoadFacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OcclusionName {
    Rectangle,
    Footprint,
}

/// Simulator parameters; speeds in km/h.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub half_length_m: f64,
    pub epsilon: f64,
    pub enforce_radius_rule: bool,
    pub n_trials: usize,
    pub snapshots_per_trial: usize,
    pub snapshot_dt_s: f64,
    pub warmup_s: f64,
    pub dt_s: f64,
    pub seed: u64,
    pub lambda_u: f64,
    pub v_max_user_kmh: f64,
    pub v_max_blockage_kmh: f64,
    pub accel: f64,
    pub decel: f64,
    pub krauss_sigma: f64,
    pub user_vehicle_length_m: f64,
    pub fading: FadingName,
    pub steering: SteeringName,
    pub occlusion: OcclusionName,
    pub confidence_z: f64,
}

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// SINR threshold, dB.
    ThetaDb,
    /// Rate threshold, bit/s.
    Kappa,
    /// BS density, 1/m.
    LambdaBs,
    /// Beamwidth, degrees.
    PsiDeg,
    /// Main-lobe transmit gain, dB.
    GTxDb,
}

/// Output curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Curve {
    #[serde(rename = "P_T_theory")]
    PtTheory,
    #[serde(rename = "P_T_sim")]
    PtSim,
    #[serde(rename = "R_C_theory")]
    RcTheory,
    #[serde(rename = "R_C_sim")]
    RcSim,
    #[serde(rename = "P_L_theory")]
    PlTheory,
    #[serde(rename = "P_L_sim")]
    PlSim,
    #[serde(rename = "MSE")]
    Mse,
}

impl Curve {
    pub fn name(self) -> &'static str {
        match self {
            Curve::PtTheory => "P_T_theory",
            Curve::PtSim => "P_T_sim",
            Curve::RcTheory => "R_C_theory",
            Curve::RcSim => "R_C_sim",
            Curve::PlTheory => "P_L_theory",
            Curve::PlSim => "P_L_sim",
            Curve::Mse => "MSE",
        }
    }

    pub fn is_sim(self) -> bool {
        matches!(self, Curve::PtSim | Curve::RcSim | Curve::PlSim)
    }

    pub fn is_theory(self) -> bool {
        matches!(self, Curve::PtTheory | Curve::RcTheory | Curve::PlTheory)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantName {
    Full,
    SimplifiedLosOnly,
    MedianDeployment,
}

impl From<VariantName> for Variant {
    fn from(v: VariantName) -> Self {
        match v {
            VariantName::Full => Variant::Full,
            VariantName::SimplifiedLosOnly => Variant::SimplifiedLosOnly,
            VariantName::MedianDeployment => Variant::MedianDeployment,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: Axis,
    pub values: Vec<f64>,
    /// SINR threshold when the axis is not a threshold, dB.
    pub theta_db: f64,
    /// Rate threshold when the axis is not a threshold, bit/s.
    pub kappa: f64,
    pub variant: VariantName,
    pub curves: Vec<Curve>,
    /// Largest accepted theory-vs-simulation MSE, if gated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mse_gate: Option<f64>,
}

/// A complete experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    pub road: RoadSection,
    pub radio: RadioSection,
    pub deployment: DeploymentSection,
    pub sim: SimSection,
    pub sweep: SweepSection,
}

impl Experiment {
    /// Reference highway parameters with one obstacle lane per direction and
    /// an outage sweep from -5 to 30 dB.
    pub fn paper_defaults() -> Self {
        let sim = SimConfig::default();
        Experiment {
            road: RoadSection {
                lane_width_m: 3.7,
                lambda_o: vec![1e-2],
                tau_m: 11.2,
                blockage_width_m: 2.52,
            },
            radio: RadioSection {
                carrier_hz: 28e9,
                alpha_l: 2.8,
                alpha_n: 4.0,
                intercept_l_db: None,
                intercept_n_db: None,
                nakagami_m: 3,
                beamwidth_deg: 30.0,
                g_tx_main_db: 20.0,
                g_tx_side_db: -10.0,
                g_rx_main_db: 10.0,
                g_rx_side_db: -10.0,
                bandwidth_hz: 100e6,
                p_t_dbm: 27.0,
                temperature_k: REFERENCE_TEMPERATURE,
            },
            deployment: DeploymentSection { lambda_bs: 4e-3 },
            sim: SimSection {
                half_length_m: sim.half_length,
                epsilon: sim.epsilon,
                enforce_radius_rule: sim.enforce_radius_rule,
                n_trials: sim.n_trials,
                snapshots_per_trial: sim.snapshots_per_trial,
                snapshot_dt_s: sim.snapshot_dt,
                warmup_s: sim.warmup,
                dt_s: sim.dt,
                seed: sim.seed,
                lambda_u: sim.lambda_u,
                v_max_user_kmh: 112.0,
                v_max_blockage_kmh: 96.0,
                accel: sim.accel,
                decel: sim.decel,
                krauss_sigma: sim.krauss_sigma,
                user_vehicle_length_m: sim.user_vehicle_length,
                fading: FadingName::Random,
                steering: SteeringName::Full,
                occlusion: OcclusionName::Rectangle,
                confidence_z: Z_98,
            },
            sweep: SweepSection {
                axis: Axis::ThetaDb,
                values: (-1..=6).map(|i| 5.0 * i as f64).collect(),
                theta_db: 5.0,
                kappa: 0.0,
                variant: VariantName::Full,
                curves: vec![Curve::PtTheory],
                mse_gate: None,
            },
        }
    }

    /// Named preset.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "paper_defaults" => Ok(Self::paper_defaults()),
            other => Err(Error::config("preset", format!("unknown preset '{other}'"))),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let e: Experiment = toml::from_str(text).map_err(|err| Error::config("toml", err.to_string()))?;
        e.validate()?;
        Ok(e)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|err| Error::config("toml", err.to_string()))
    }

    /// Radio parameters in linear units.
    pub fn radio_config(&self) -> Result<RadioConfig> {
        let r = &self.radio;
        let (c_l, c_n) = derive_intercepts(r.carrier_hz).map_err(|e| config_from("radio.carrier_hz", e))?;
        let p_t_watts = dbm_to_watts(r.p_t_dbm);
        let sigma = derive_noise(r.bandwidth_hz, r.temperature_k, p_t_watts).map_err(|e| config_from("radio", e))?;
        Ok(RadioConfig {
            carrier_hz: r.carrier_hz,
            alpha_l: r.alpha_l,
            alpha_n: r.alpha_n,
            c_l: r.intercept_l_db.map_or(c_l, db_to_linear),
            c_n: r.intercept_n_db.map_or(c_n, db_to_linear),
            m: r.nakagami_m,
            psi: r.beamwidth_deg.to_radians(),
            g_tx_main: db_to_linear(r.g_tx_main_db),
            g_tx_side: db_to_linear(r.g_tx_side_db),
            g_rx_main: db_to_linear(r.g_rx_main_db),
            g_rx_side: db_to_linear(r.g_rx_side_db),
            bandwidth_hz: r.bandwidth_hz,
            p_t_watts,
            sigma,
        })
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let layout = RoadLayout {
            lane_width: self.road.lane_width_m,
            lambda_o: self.road.lambda_o.clone(),
            tau: self.road.tau_m,
            blockage_width: self.road.blockage_width_m,
        };
        Scenario::new(
            layout,
            self.radio_config()?,
            DeploymentConfig::new(self.deployment.lambda_bs),
        )
    }

    pub fn sim_config(&self) -> SimConfig {
        let s = &self.sim;
        SimConfig {
            half_length: s.half_length_m,
            epsilon: s.epsilon,
            enforce_radius_rule: s.enforce_radius_rule,
            n_trials: s.n_trials,
            snapshots_per_trial: s.snapshots_per_trial,
            snapshot_dt: s.snapshot_dt_s,
            warmup: s.warmup_s,
            dt: s.dt_s,
            seed: s.seed,
            lambda_u: s.lambda_u,
            v_max_user: s.v_max_user_kmh / 3.6,
            v_max_blockage: s.v_max_blockage_kmh / 3.6,
            accel: s.accel,
            decel: s.decel,
            krauss_sigma: s.krauss_sigma,
            user_vehicle_length: s.user_vehicle_length_m,
            fading: match s.fading {
                FadingName::Random => FadingMode::Random,
                FadingName::Unit => FadingMode::Unit,
            },
            steering: match s.steering {
                SteeringName::Full => SteeringSupport::Full,
                SteeringName::RoadFacing => SteeringSupport::RoadFacing,
            },
            occlusion: match s.occlusion {
                OcclusionName::Rectangle => Occlusion::Rectangle,
                OcclusionName::Footprint => Occlusion::Footprint,
            },
            z: s.confidence_z,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let sweep = &self.sweep;
        if sweep.values.is_empty() {
            return Err(Error::config("sweep.values", "grid must not be empty"));
        }
        if sweep.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("sweep.values", "grid values must be finite"));
        }
        if sweep.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("sweep.values", "grid must be strictly increasing"));
        }
        if sweep.curves.is_empty() {
            return Err(Error::config("sweep.curves", "at least one curve is required"));
        }
        if let Some(g) = sweep.mse_gate {
            if !(g >= 0.0) {
                return Err(Error::config("sweep.mse_gate", "must be non-negative"));
            }
        }
        if !(sweep.kappa >= 0.0 && sweep.theta_db.is_finite()) {
            return Err(Error::config(
                "sweep.kappa/theta_db",
                "thresholds must be finite and non-negative",
            ));
        }
        let positive_axis = matches!(sweep.axis, Axis::LambdaBs | Axis::PsiDeg | Axis::Kappa);
        if positive_axis && sweep.values.iter().any(|&v| v < 0.0) {
            return Err(Error::config(
                "sweep.values",
                "values must be non-negative for this axis",
            ));
        }
        self.scenario()?;
        self.sim_config().validate()?;
        for &v in &sweep.values {
            self.at(v)?;
        }
        Ok(())
    }

    /// Copy of the experiment with the swept parameter set to `value`.
    pub fn at(&self, value: f64) -> Result<Experiment> {
        let mut e = self.clone();
        match self.sweep.axis {
            Axis::ThetaDb => e.sweep.theta_db = value,
            Axis::Kappa => e.sweep.kappa = value,
            Axis::LambdaBs => e.deployment.lambda_bs = value,
            Axis::PsiDeg => e.radio.beamwidth_deg = value,
            Axis::GTxDb => e.radio.g_tx_main_db = value,
        }
        e.scenario()?;
        Ok(e)
    }
}

fn config_from(field: &str, e: Error) -> Error {
    Error::config(field, e.to_string())
}

pub fn load_config(path: &Path) -> Result<Experiment> {
    let text = std::fs::read_to_string(path)?;
    Experiment::from_toml_str(&text)
}

pub fn save_config(e: &Experiment, path: &Path) -> Result<()> {
    std::fs::write(path, e.to_toml_string()?)?;
    Ok(())
}
