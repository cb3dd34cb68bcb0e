use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// Above this Γ(x) overflows an f64.
const GAMMA_MAX_ARG: f64 = 171.6;

fn lanczos(x: f64) -> f64 {
    // valid for x >= 0.5
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // t^(x+1/2) overflows near the top of the range, so split it.
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * acc
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Γ(x) for x > 0.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("gamma_fn", format!("argument must be positive, got {x}")));
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::domain("gamma_fn", format!("Γ({x}) overflows")));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * lanczos(1.0 - x))
    } else {
        lanczos(x)
    }
}

/// Γ(x) for any real x that is not a pole.
pub fn gamma_signed(x: f64) -> Result<f64> {
    if !x.is_finite() || is_pole(x) {
        return Err(Error::domain("gamma_signed", format!("Γ has a pole at {x}")));
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::domain("gamma_signed", format!("Γ({x}) overflows")));
    }
    Ok(gamma_unchecked(x))
}

/// 1/Γ(x), which is zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if is_pole(x) || x > GAMMA_MAX_ARG {
        0.0
    } else {
        1.0 / gamma_unchecked(x)
    }
}
