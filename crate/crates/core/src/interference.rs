//! Laplace transform of the aggregate interference seen by the user.
//!
//! Interferers on each road side are split into abscissa segments (a, b) with
//! a constant antenna gain Δ. Each segment contributes a closed-form factor
//! exp(-(Θ + Λ)), where Λ is expressed through the Gauss hypergeometric
//! function. The transmit gain of every interferer is taken as g_TX.

use std::f64::consts::PI;

use crate::association::abscissa;
use crate::error::{Error, Result};
use crate::numerics::{gamma_fn, hyp2f1_regularized};
use crate::scenario::{exclusion_radius_l, exclusion_radius_n, LinkState, RadioConfig, Scenario, ServingLink, Side};

/// Abscissa range [a, b) of interferers received with gain `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSegment {
    pub a: f64,
    /// May be `f64::INFINITY`.
    pub b: f64,
    pub delta: f64,
}

/// Where the user beam meets the serving side of the road, plus the
/// exclusion abscissae x_L(r₁) and x_N(r₁).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamGeometry {
    /// Intercept of the outer beam edge; negative when the beam crosses the
    /// perpendicular to the road.
    pub j: f64,
    /// Intercept of the inner beam edge; infinite when that edge does not
    /// reach the road side.
    pub k: f64,
    pub x_l: f64,
    pub x_n: f64,
}

/// Beam intercepts for a user steering towards the serving BS.
///
/// Angles are measured in the frame of the serving side with the serving BS
/// at a non-negative abscissa, so ε = atan2(w(N_o+1), |x₁|) lies in (0, π/2].
pub fn beam_geometry(link: &ServingLink, scenario: &Scenario) -> BeamGeometry {
    let h = scenario.half_width();
    let psi = scenario.radio.psi;
    let eps = h.atan2(link.x1.abs());
    let outer = eps + 0.5 * psi;
    let inner = eps - 0.5 * psi;
    let j = h * outer.cos() / outer.sin();
    let k = if inner <= 0.0 {
        f64::INFINITY
    } else {
        h * inner.cos() / inner.sin()
    };
    let radio = &scenario.radio;
    let layout = &scenario.layout;
    BeamGeometry {
        j,
        k,
        x_l: abscissa(exclusion_radius_l(link.r1, radio, layout), h),
        x_n: abscissa(exclusion_radius_n(link.r1, radio, layout), h),
    }
}

/// Segments (a, b, Δ) for interferers on `side` in state `state`, under the
/// hypothesis that the serving BS sits on `hypothesis`.
///
/// On the serving side the half-line towards the serving BS is split at J
/// and K, the other half-line at |J| when J ≤ 0; every piece is then clipped
/// to start at the exclusion abscissa. On the opposite side the user always
/// receives through a side lobe and both half-lines form a single segment.
pub fn gain_segments(
    link: &ServingLink,
    hypothesis: Side,
    side: Side,
    state: LinkState,
    geom: &BeamGeometry,
    radio: &RadioConfig,
) -> Vec<GainSegment> {
    let lo = match (link.los, state) {
        (LinkState::Los, LinkState::Los) | (LinkState::Nlos, LinkState::Nlos) => link.x1.abs(),
        (LinkState::Los, LinkState::Nlos) => geom.x_n,
        (LinkState::Nlos, LinkState::Los) => geom.x_l,
    };
    let side_gain = radio.g_tx_side * radio.g_rx_side;
    let main_gain = radio.g_tx_side * radio.g_rx_main;
    let inf = f64::INFINITY;
    if hypothesis != side {
        let seg = GainSegment {
            a: lo,
            b: inf,
            delta: side_gain,
        };
        return vec![seg, seg];
    }
    let pieces: Vec<(f64, f64, f64)> = if geom.j > 0.0 {
        vec![
            (0.0, geom.j, side_gain),
            (geom.j, geom.k, main_gain),
            (geom.k, inf, side_gain),
            (0.0, inf, side_gain),
        ]
    } else {
        let back = -geom.j;
        vec![
            (0.0, geom.k, main_gain),
            (geom.k, inf, side_gain),
            (0.0, back, main_gain),
            (back, inf, side_gain),
        ]
    };
    pieces
        .into_iter()
        .filter_map(|(a, b, delta)| {
            let a = a.max(lo);
            (a < b).then_some(GainSegment { a, b, delta })
        })
        .collect()
}

/// Θ and Λ of one segment for k = s·Δ·C_E and density λ_E (already
/// multiplied by 2q = 1).
///
/// Θ + Λ = λ_E ∫_a^b k / (k + t^α) dt.
pub fn segment_terms(k: f64, a: f64, b: f64, alpha: f64, lambda: f64) -> Result<(f64, f64)> {
    if !(k >= 0.0 && lambda >= 0.0 && a >= 0.0 && alpha > 1.0) || a.is_nan() || b.is_nan() {
        return Err(Error::domain(
            "segment_terms",
            format!("invalid inputs k={k}, a={a}, b={b}, alpha={alpha}, lambda={lambda}"),
        ));
    }
    if k == 0.0 || lambda == 0.0 || !(a < b) {
        return Ok((0.0, 0.0));
    }
    let beta = 1.0 / alpha;
    let theta = lambda * (boundary(k, b, alpha) - boundary(k, a, alpha));
    let (ua, va) = split(k, a, alpha);
    let (ub, vb) = split(k, b, alpha);
    let diff = if ub <= 0.5 {
        lower_beta(ub, beta)? - lower_beta(ua, beta)?
    } else if ua > 0.5 {
        upper_beta(va, beta)? - upper_beta(vb, beta)?
    } else {
        complete_beta(beta) - upper_beta(vb, beta)? - lower_beta(ua, beta)?
    };
    Ok((theta, lambda * k.powf(beta) * diff))
}

// x^{-1/α}(1 - 1/(k x + 1)) at x = t^{-α}, i.e. k t / (k + t^α).
fn boundary(k: f64, t: f64, alpha: f64) -> f64 {
    if t == 0.0 || t.is_infinite() {
        return 0.0;
    }
    let ta = t.powf(alpha);
    if ta.is_infinite() {
        0.0
    } else {
        k * t / (k + ta)
    }
}

// u = 1/(k t^{-α} + 1) and v = 1 - u, each computed without cancellation.
fn split(k: f64, t: f64, alpha: f64) -> (f64, f64) {
    if t == 0.0 {
        return (0.0, 1.0);
    }
    let ta = t.powf(alpha);
    if ta.is_infinite() {
        return (1.0, 0.0);
    }
    let den = k + ta;
    (ta / den, k / den)
}

// ∫_0^u w^β (1-w)^{-β} dw = Γ(β+1) u^{β+1} ₂F̃₁(β, β+1; β+2; u).
fn lower_beta(u: f64, beta: f64) -> Result<f64> {
    if u == 0.0 {
        return Ok(0.0);
    }
    let f = hyp2f1_regularized(beta, beta + 1.0, beta + 2.0, u).map_err(|e| e.within("laplace_segment"))?;
    Ok(gamma_fn(beta + 1.0)? * u.powf(beta + 1.0) * f)
}

// ∫_{1-v}^1 w^β (1-w)^{-β} dw = Γ(1-β) v^{1-β} ₂F̃₁(-β, 1-β; 2-β; v).
fn upper_beta(v: f64, beta: f64) -> Result<f64> {
    if v == 0.0 {
        return Ok(0.0);
    }
    let f = hyp2f1_regularized(-beta, 1.0 - beta, 2.0 - beta, v).map_err(|e| e.within("laplace_segment"))?;
    Ok(gamma_fn(1.0 - beta)? * v.powf(1.0 - beta) * f)
}

// Γ(β+1)Γ(1-β) = πβ / sin(πβ).
fn complete_beta(beta: f64) -> f64 {
    PI * beta / (PI * beta).sin()
}

/// Θ + Λ of a segment at Laplace variable `s`.
pub fn segment_exponent(s: f64, seg: &GainSegment, state: LinkState, scenario: &Scenario) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::domain(
            "laplace_segment",
            format!("s must be non-negative, got {s}"),
        ));
    }
    let radio = &scenario.radio;
    let k = s * seg.delta * radio.intercept(state);
    let lambda = scenario.densities().lambda(state);
    let (theta, lam) = segment_terms(k, seg.a, seg.b, radio.alpha(state), lambda)?;
    Ok(theta + lam)
}

/// exp(-(Θ + Λ)) for one segment.
pub fn laplace_segment(s: f64, seg: &GainSegment, state: LinkState, scenario: &Scenario) -> Result<f64> {
    Ok((-segment_exponent(s, seg, state, scenario)?).exp())
}

/// The segments entering L_I for a given serving link, each with its weight
/// in the exponent. Built once per link and evaluated at many `s`.
#[derive(Debug, Clone)]
pub struct InterferenceProfile {
    terms: Vec<(GainSegment, LinkState)>,
}

impl InterferenceProfile {
    /// Profile restricted to the listed sides and states.
    pub fn build(link: &ServingLink, scenario: &Scenario, sides: &[Side], states: &[LinkState]) -> Self {
        let geom = beam_geometry(link, scenario);
        let mut terms = Vec::new();
        for &side in sides {
            for &state in states {
                for hypothesis in [Side::Upper, Side::Bottom] {
                    for seg in gain_segments(link, hypothesis, side, state, &geom, &scenario.radio) {
                        terms.push((seg, state));
                    }
                }
            }
        }
        InterferenceProfile { terms }
    }

    /// All four side/state families.
    pub fn full(link: &ServingLink, scenario: &Scenario) -> Self {
        Self::build(
            link,
            scenario,
            &[Side::Upper, Side::Bottom],
            &[LinkState::Los, LinkState::Nlos],
        )
    }

    pub fn segments(&self) -> &[(GainSegment, LinkState)] {
        &self.terms
    }

    /// -ln L_I(s). Every factor enters under a square root.
    pub fn exponent(&self, s: f64, scenario: &Scenario) -> Result<f64> {
        let mut total = 0.0;
        for (seg, state) in &self.terms {
            total += 0.5 * segment_exponent(s, seg, *state, scenario)?;
        }
        Ok(total)
    }

    pub fn laplace(&self, s: f64, scenario: &Scenario) -> Result<f64> {
        Ok((-self.exponent(s, scenario)?).exp())
    }
}

/// L_{I_{S,E}}(s): product over both serving-side hypotheses and all their
/// segments of the square-rooted segment transforms.
pub fn laplace_ise(s: f64, side: Side, state: LinkState, link: &ServingLink, scenario: &Scenario) -> Result<f64> {
    InterferenceProfile::build(link, scenario, &[side], &[state]).laplace(s, scenario)
}

/// L_I(s) = Π_{S, E} L_{I_{S,E}}(s).
pub fn laplace_i(s: f64, link: &ServingLink, scenario: &Scenario) -> Result<f64> {
    InterferenceProfile::full(link, scenario).laplace(s, scenario)
}
