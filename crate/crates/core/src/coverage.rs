//! SINR outage probability, its LOS-only and median-deployment
//! simplifications, and rate coverage.

use std::cell::RefCell;

use crate::association::{association_probabilities_with, integrate_nearest, no_closer_los, no_closer_nlos};
use crate::error::{Error, Result};
use crate::interference::InterferenceProfile;
use crate::numerics::{NeumaierSum, QuadratureSpec};
use crate::scenario::{LinkState, RoadLayout, Scenario, ServingLink, Side};

/// Largest Nakagami shape accepted by the binomial expansion.
pub const MAX_NAKAGAMI_M: u32 = 10;

/// Slack allowed on P_CL ≤ P_L before a diagnostic is logged.
const CLAMP_SLACK: f64 = 1e-4;

/// Which outage expression to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    /// P_L - P_CL + P_N - P_CN.
    #[default]
    Full,
    /// 1 - P_CL with the NLOS competition factor dropped.
    SimplifiedLosOnly,
    /// BSs on the median line: half the road width, p_L = 1 and only the
    /// upper LOS interferer family.
    MedianDeployment,
}

/// Outage or rate query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageQuery {
    /// Linear SINR threshold.
    pub theta: f64,
    /// Rate threshold in bit/s.
    pub kappa: f64,
    pub variant: Variant,
}

impl OutageQuery {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(Error::config("theta", "must be a non-negative finite threshold"));
        }
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(Error::config("kappa", "must be non-negative"));
        }
        Ok(())
    }
}

/// The terms of the outage probability.
#[derive(Debug, Clone, PartialEq)]
pub struct OutageBreakdown {
    pub p_t: f64,
    pub p_l: f64,
    pub p_n: f64,
    pub p_cl: f64,
    pub p_cn: f64,
    /// Messages for values clamped back into range.
    pub diagnostics: Vec<String>,
}

/// v = m (m!)^{-1/m}.
pub fn nakagami_v(m: u32) -> Result<f64> {
    if m < 1 {
        return Err(Error::domain("nakagami_v", "m must be at least 1"));
    }
    let mf = m as f64;
    let ln_fact: f64 = (1..=m).map(|i| (i as f64).ln()).sum();
    Ok(mf * (-ln_fact / mf).exp())
}

fn binomial(m: u32, j: u32) -> f64 {
    (1..=j).fold(1.0, |acc, i| acc * (m - j + i) as f64 / i as f64)
}

/// Linear SINR threshold equivalent to a rate of `kappa` bit/s.
pub fn kappa_to_theta(kappa: f64, bandwidth_hz: f64) -> f64 {
    (kappa / bandwidth_hz * std::f64::consts::LN_2).exp_m1()
}

// Probability of SINR > θ while served in state `serving`, with the
// competing-state factor optional and the interference profile supplied by
// `profile`.
fn covered_in_state<P>(
    theta: f64,
    serving: LinkState,
    scenario: &Scenario,
    spec: &QuadratureSpec,
    with_competitor: bool,
    profile: P,
) -> Result<f64>
where
    P: Fn(&ServingLink) -> InterferenceProfile,
{
    let radio = &scenario.radio;
    if radio.m > MAX_NAKAGAMI_M {
        return Err(Error::config("radio.m", format!("m must not exceed {MAX_NAKAGAMI_M}")));
    }
    let lambda = scenario.densities().lambda(serving);
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let v = nakagami_v(radio.m)?;
    let alpha = radio.alpha(serving);
    let c = radio.intercept(serving);
    let delta1 = radio.serving_gain();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |r: f64| -> f64 {
        let eval = || -> Result<f64> {
            let link = ServingLink::at_distance(Side::Upper, serving, r, scenario)?;
            let prof = profile(&link);
            let s1 = v * theta * r.powf(alpha) / (delta1 * c);
            let noise = s1 * radio.sigma;
            let mut acc = NeumaierSum::new();
            for j in 1..=radio.m {
                let jf = j as f64;
                let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                let expo = jf * noise + prof.exponent(jf * s1, scenario)?;
                acc.add(sign * binomial(radio.m, j) * (-expo).exp());
            }
            let competitor = if with_competitor {
                match serving {
                    LinkState::Los => no_closer_nlos(r, scenario),
                    LinkState::Nlos => no_closer_los(r, scenario),
                }
            } else {
                1.0
            };
            Ok(acc.value() * competitor)
        };
        match eval() {
            Ok(x) => x,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let out = integrate_nearest(lambda, &scenario.layout, spec, integrand);
    if let Some(e) = failure.into_inner() {
        return Err(e.within("coverage"));
    }
    out.map_err(|e| e.within("coverage"))
}

/// P_CL(θ): probability of SINR > θ while served by a LOS BS.
pub fn p_cl(theta: f64, scenario: &Scenario) -> Result<f64> {
    p_cl_with(theta, scenario, &QuadratureSpec::default())
}

pub fn p_cl_with(theta: f64, scenario: &Scenario, spec: &QuadratureSpec) -> Result<f64> {
    check_theta(theta)?;
    covered_in_state(theta, LinkState::Los, scenario, spec, true, |l| {
        InterferenceProfile::full(l, scenario)
    })
}

/// P_CN(θ): probability of SINR > θ while served by a NLOS BS.
pub fn p_cn(theta: f64, scenario: &Scenario) -> Result<f64> {
    p_cn_with(theta, scenario, &QuadratureSpec::default())
}

pub fn p_cn_with(theta: f64, scenario: &Scenario, spec: &QuadratureSpec) -> Result<f64> {
    check_theta(theta)?;
    covered_in_state(theta, LinkState::Nlos, scenario, spec, true, |l| {
        InterferenceProfile::full(l, scenario)
    })
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(Error::domain(
            "outage_probability",
            format!("threshold must be non-negative, got {theta}"),
        ));
    }
    Ok(())
}

fn clamp_into(value: f64, upper: f64, name: &str, diagnostics: &mut Vec<String>) -> f64 {
    if value < -CLAMP_SLACK || value > upper + CLAMP_SLACK {
        let msg = format!("{name} = {value:.6e} outside [0, {upper:.6e}], clamped");
        log::warn!("{msg}");
        diagnostics.push(msg);
    }
    value.clamp(0.0, upper)
}

/// Outage probability with all its terms.
pub fn outage_breakdown(
    theta: f64,
    variant: Variant,
    scenario: &Scenario,
    spec: &QuadratureSpec,
) -> Result<OutageBreakdown> {
    check_theta(theta)?;
    scenario.validate()?;
    let mut diagnostics = Vec::new();
    match variant {
        Variant::Full => {
            let assoc = association_probabilities_with(scenario, spec)?;
            let raw_cl = p_cl_with(theta, scenario, spec)?;
            let raw_cn = p_cn_with(theta, scenario, spec)?;
            let p_cl = clamp_into(raw_cl, assoc.p_l, "P_CL", &mut diagnostics);
            let p_cn = clamp_into(raw_cn, assoc.p_n, "P_CN", &mut diagnostics);
            let p_t = (assoc.p_l - p_cl + assoc.p_n - p_cn).clamp(0.0, 1.0);
            Ok(OutageBreakdown {
                p_t,
                p_l: assoc.p_l,
                p_n: assoc.p_n,
                p_cl,
                p_cn,
                diagnostics,
            })
        }
        Variant::SimplifiedLosOnly => {
            let raw = covered_in_state(theta, LinkState::Los, scenario, spec, false, |l| {
                InterferenceProfile::full(l, scenario)
            })?;
            let p_cl = clamp_into(raw, 1.0, "P_CL", &mut diagnostics);
            Ok(OutageBreakdown {
                p_t: 1.0 - p_cl,
                p_l: 1.0,
                p_n: 0.0,
                p_cl,
                p_cn: 0.0,
                diagnostics,
            })
        }
        Variant::MedianDeployment => {
            let median = median_scenario(scenario);
            let raw = covered_in_state(theta, LinkState::Los, &median, spec, false, |l| {
                InterferenceProfile::build(l, &median, &[Side::Upper], &[LinkState::Los])
            })?;
            let p_cl = clamp_into(raw, 1.0, "P_CL", &mut diagnostics);
            Ok(OutageBreakdown {
                p_t: 1.0 - p_cl,
                p_l: 1.0,
                p_n: 0.0,
                p_cl,
                p_cn: 0.0,
                diagnostics,
            })
        }
    }
}

// Same radio and density, road half-width halved and no blockage.
fn median_scenario(scenario: &Scenario) -> Scenario {
    let layout = &scenario.layout;
    Scenario {
        layout: RoadLayout {
            lane_width: 0.5 * layout.lane_width,
            lambda_o: vec![0.0; layout.n_obstacle_lanes()],
            tau: layout.tau,
            blockage_width: layout.blockage_width,
        },
        radio: scenario.radio.clone(),
        deployment: scenario.deployment,
    }
}

/// P_T(θ) for a linear threshold θ.
pub fn outage_probability(theta: f64, variant: Variant, scenario: &Scenario) -> Result<f64> {
    outage_breakdown(theta, variant, scenario, &QuadratureSpec::default()).map(|b| b.p_t)
}

/// P_T at the threshold of `query` (its `kappa` is ignored).
pub fn outage_for_query(query: &OutageQuery, scenario: &Scenario) -> Result<f64> {
    query.validate()?;
    outage_probability(query.theta, query.variant, scenario)
}

/// R_C(κ) = 1 - P_T(2^{κ/W} - 1).
pub fn rate_coverage(kappa: f64, variant: Variant, scenario: &Scenario) -> Result<f64> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::domain(
            "rate_coverage",
            format!("rate must be non-negative, got {kappa}"),
        ));
    }
    let theta = kappa_to_theta(kappa, scenario.radio.bandwidth_hz);
    Ok(1.0 - outage_probability(theta, variant, scenario)?)
}
