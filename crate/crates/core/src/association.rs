//! Distance to the nearest LOS and NLOS base station, and the probability of
//! being served in LOS or NLOS.

use crate::error::{Error, Result};
use crate::numerics::{integrate_semi_infinite, QuadratureSpec, Truncation};
use crate::scenario::{exclusion_radius_l, exclusion_radius_n, LinkState, RoadLayout, Scenario};

/// LOS/NLOS association probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssocResult {
    /// Reported as 1 - P_N.
    pub p_l: f64,
    pub p_n: f64,
    /// P_L integrated directly, kept as a cross-check of `p_l`.
    pub p_l_direct: f64,
}

/// Abscissa b(r) = √(r² - w²(N_o+1)²) of a BS at distance r.
pub fn b_of_r(r: f64, layout: &RoadLayout) -> Result<f64> {
    let h = layout.half_width();
    if !(r >= h) {
        return Err(Error::domain(
            "b_of_r",
            format!("distance {r} m is below the road half-width {h} m"),
        ));
    }
    Ok(((r - h) * (r + h)).sqrt())
}

/// Distance of a BS at abscissa t ≥ 0.
pub fn r_of_b(t: f64, layout: &RoadLayout) -> f64 {
    t.hypot(layout.half_width())
}

/// Density f_E(r) of the distance to the nearest BS in state E.
pub fn pdf_nearest(r: f64, state: LinkState, scenario: &Scenario) -> Result<f64> {
    let h = scenario.half_width();
    if !(r > h) {
        return Err(Error::domain(
            "pdf_nearest",
            format!("distance {r} m must exceed the road half-width {h} m"),
        ));
    }
    let lambda = scenario.densities().lambda(state);
    let b = b_of_r(r, &scenario.layout)?;
    Ok(2.0 * lambda * r / b * (-2.0 * lambda * b).exp())
}

/// Probability F_E(t) that no BS in state E is closer than t.
pub fn survival(t: f64, state: LinkState, scenario: &Scenario) -> Result<f64> {
    let b = b_of_r(t, &scenario.layout).map_err(|e| e.within("survival"))?;
    Ok(void_probability(scenario.densities().lambda(state), b))
}

fn void_probability(lambda: f64, abscissa: f64) -> f64 {
    (-2.0 * lambda * abscissa).exp()
}

/// ∫ f_E(r) g(r) dr over r ≥ w(N_o+1), written in t = b(r) so that the
/// boundary singularity of f_E disappears, then mapped to [0, 1) through the
/// exponential envelope of the nearest-BS law.
pub(crate) fn integrate_nearest<G: Fn(f64) -> f64>(
    lambda: f64,
    layout: &RoadLayout,
    spec: &QuadratureSpec,
    g: G,
) -> Result<f64> {
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let spec = spec.with_truncation(Truncation::ExponentialMap { rate: 2.0 * lambda });
    let integrand = |t: f64| {
        let env = 2.0 * lambda * (-2.0 * lambda * t).exp();
        if env == 0.0 {
            0.0
        } else {
            env * g(r_of_b(t, layout))
        }
    };
    integrate_semi_infinite(integrand, 0.0, &spec)
}

/// Probability that the closest LOS BS at distance r beats every NLOS BS.
pub(crate) fn no_closer_nlos(r: f64, scenario: &Scenario) -> f64 {
    let d = scenario.densities();
    let a = exclusion_radius_n(r, &scenario.radio, &scenario.layout);
    void_probability(d.lambda_n, abscissa(a, scenario.half_width()))
}

/// Probability that the closest NLOS BS at distance r beats every LOS BS.
pub(crate) fn no_closer_los(r: f64, scenario: &Scenario) -> f64 {
    let d = scenario.densities();
    let a = exclusion_radius_l(r, &scenario.radio, &scenario.layout);
    void_probability(d.lambda_l, abscissa(a, scenario.half_width()))
}

// b(r) for r already known to be at least h.
pub(crate) fn abscissa(r: f64, h: f64) -> f64 {
    ((r - h) * (r + h)).max(0.0).sqrt()
}

pub fn association_probabilities(scenario: &Scenario) -> Result<AssocResult> {
    association_probabilities_with(scenario, &QuadratureSpec::default())
}

pub fn association_probabilities_with(scenario: &Scenario, spec: &QuadratureSpec) -> Result<AssocResult> {
    scenario.validate()?;
    let d = scenario.densities();
    let p_n = integrate_nearest(d.lambda_n, &scenario.layout, spec, |r| no_closer_los(r, scenario))
        .map_err(|e| e.within("association_probabilities"))?;
    let p_l_direct = integrate_nearest(d.lambda_l, &scenario.layout, spec, |r| no_closer_nlos(r, scenario))
        .map_err(|e| e.within("association_probabilities"))?;
    Ok(AssocResult {
        p_l: 1.0 - p_n,
        p_n,
        p_l_direct,
    })
}
