use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Map used to turn [a, ∞) into a finite interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    /// x = a + scale·u/(1-u), u ∈ [0, 1).
    RationalMap { scale: f64 },
    /// x = a - ln(1-u)/rate, u ∈ [0, 1). Turns an e^{-rate·(x-a)} envelope
    /// into a constant.
    ExponentialMap { rate: f64 },
    /// Plain truncation of the domain at `upper`.
    Truncate { upper: f64 },
}

/// Tolerances and limits for adaptive Gauss–Kronrod quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub truncation: Truncation,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-9,
            rel_tol: 1e-7,
            max_subdivisions: 500,
            truncation: Truncation::RationalMap { scale: 1.0 },
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::config("abs_tol", "must be positive"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::config("rel_tol", "must be positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::config("max_subdivisions", "must be at least 1"));
        }
        match self.truncation {
            Truncation::RationalMap { scale } if !(scale > 0.0 && scale.is_finite()) => {
                Err(Error::config("truncation.scale", "must be positive and finite"))
            }
            Truncation::ExponentialMap { rate } if !(rate > 0.0 && rate.is_finite()) => {
                Err(Error::config("truncation.rate", "must be positive and finite"))
            }
            Truncation::Truncate { upper } if !upper.is_finite() => {
                Err(Error::config("truncation.upper", "must be finite"))
            }
            _ => Ok(()),
        }
    }
}

/// Result of an adaptive integration with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOutcome {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

// 15-point Kronrod abscissae and weights, with the embedded 7-point Gauss rule.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Piece> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    if !kronrod.is_finite() || fv1.iter().chain(fv2.iter()).any(|v| !v.is_finite()) || !fc.is_finite() {
        return Err(Error::numerical(
            "quadrature",
            format!("integrand is not finite on [{a}, {b}]"),
            None,
        ));
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Piece { a, b, value, error })
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadratureOutcome> {
    let first = kronrod(f, a, b)?;
    let mut heap = BinaryHeap::new();
    let mut total = first.value;
    let mut total_err = first.error;
    heap.push(first);
    let mut evaluations = 15;
    let mut subdivisions = 0;
    // pieces that cannot be split further
    let mut frozen_value = 0.0;
    let mut frozen_err = 0.0;
    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a).abs() <= 1e3 * f64::EPSILON * mid.abs() {
            frozen_value += worst.value;
            frozen_err += worst.error;
            continue;
        }
        if subdivisions >= spec.max_subdivisions {
            heap.push(worst);
            return Err(Error::numerical(
                "quadrature",
                format!(
                    "subdivision limit {} reached on [{a}, {b}]: estimate {total:e}, error {total_err:e}",
                    spec.max_subdivisions
                ),
                Some(total),
            ));
        }
        let left = kronrod(f, worst.a, mid)?;
        let right = kronrod(f, mid, worst.b)?;
        evaluations += 30;
        subdivisions += 1;
        heap.push(left);
        heap.push(right);
        // Re-sum from scratch to keep the running totals from drifting.
        let mut v = frozen_value;
        let mut e = frozen_err;
        for p in heap.iter() {
            v += p.value;
            e += p.error;
        }
        total = v;
        total_err = e;
    }
    let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
    if total_err > tol {
        return Err(Error::numerical(
            "quadrature",
            format!("tolerance not reached on [{a}, {b}]: estimate {total:e}, error {total_err:e}"),
            Some(total),
        ));
    }
    Ok(QuadratureOutcome {
        value: total,
        abs_error: total_err,
        evaluations,
        subdivisions,
    })
}

/// ∫_a^b f with adaptive Gauss–Kronrod (7/15) refinement.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    integrate_finite_detailed(f, a, b, spec).map(|o| o.value)
}

pub fn integrate_finite_detailed<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureOutcome> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(
            "integrate_finite",
            format!("bounds must be finite, got [{a}, {b}]"),
        ));
    }
    if a > b {
        return Err(Error::domain(
            "integrate_finite",
            format!("lower bound {a} exceeds upper bound {b}"),
        ));
    }
    if a == b {
        return Ok(QuadratureOutcome {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
            subdivisions: 0,
        });
    }
    adaptive(&f, a, b, spec)
}

/// ∫_a^∞ f, mapped to a finite interval by `spec.truncation`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, a: f64, spec: &QuadratureSpec) -> Result<f64> {
    integrate_semi_infinite_detailed(f, a, spec).map(|o| o.value)
}

pub fn integrate_semi_infinite_detailed<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureOutcome> {
    spec.validate()?;
    if !a.is_finite() {
        return Err(Error::domain(
            "integrate_semi_infinite",
            format!("lower bound must be finite, got {a}"),
        ));
    }
    match spec.truncation {
        Truncation::RationalMap { scale } => {
            let g = |u: f64| {
                let om = 1.0 - u;
                let x = a + scale * u / om;
                let v = f(x);
                if v == 0.0 {
                    0.0
                } else {
                    v * scale / (om * om)
                }
            };
            adaptive(&g, 0.0, 1.0, spec)
        }
        Truncation::ExponentialMap { rate } => {
            let g = |u: f64| {
                let om = 1.0 - u;
                let x = a - (-u).ln_1p() / rate;
                let v = f(x);
                if v == 0.0 {
                    0.0
                } else {
                    v / (rate * om)
                }
            };
            adaptive(&g, 0.0, 1.0, spec)
        }
        Truncation::Truncate { upper } => integrate_finite_detailed(f, a, upper.max(a), spec),
    }
}
