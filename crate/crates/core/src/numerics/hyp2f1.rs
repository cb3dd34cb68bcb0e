use super::gamma::{gamma_signed, recip_gamma};
use super::summation::NeumaierSum;
use crate::error::{Error, Result};

const SERIES_MAX_TERMS: usize = 200_000;
const SERIES_REL_EPS: f64 = 1e-17;
// Below this distance from an integer, c - a - b is treated as an integer and
// the 1 - z connection formula is not used.
const INTEGER_GAP: f64 = 1e-6;

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for real arguments, z ≤ 1.
///
/// |z| ≤ 1/2 is summed directly; z < -1/2 goes through the Pfaff
/// transformation and 1/2 < z < 1 through the 1 - z connection formula.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if ![a, b, c, z].iter().all(|v| v.is_finite()) {
        return Err(Error::domain(
            "hyp2f1",
            format!("non-finite argument ({a}, {b}, {c}, {z})"),
        ));
    }
    if c <= 0.0 && c == c.round() {
        return Err(Error::domain("hyp2f1", format!("c = {c} is a non-positive integer")));
    }
    if z > 1.0 {
        return Err(Error::domain("hyp2f1", format!("z = {z} lies on the branch cut")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z == 1.0 {
        return at_unity(a, b, c);
    }
    if z < -0.5 {
        let w = z / (z - 1.0);
        let inner = hyp2f1(a, c - b, c, w).map_err(|e| e.within("hyp2f1"))?;
        return Ok((1.0 - z).powf(-a) * inner);
    }
    if z <= 0.5 {
        return series(a, b, c, z);
    }
    let d = c - a - b;
    if (d - d.round()).abs() < INTEGER_GAP {
        return series(a, b, c, z);
    }
    connection(a, b, c, z)
}

/// Regularized ₂F̃₁(a, b; c; z) = ₂F₁(a, b; c; z) / Γ(c).
pub fn hyp2f1_regularized(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    Ok(hyp2f1(a, b, c, z)? * recip_gamma(c))
}

fn series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut sum = NeumaierSum::new();
    let mut term = 1.0;
    sum.add(term);
    let mut quiet = 0;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        if term == 0.0 {
            return Ok(sum.value());
        }
        sum.add(term);
        if term.abs() <= SERIES_REL_EPS * sum.value().abs() {
            quiet += 1;
            if quiet >= 3 {
                return Ok(sum.value());
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::numerical(
        "hyp2f1",
        format!("series for ({a}, {b}; {c}; {z}) did not converge in {SERIES_MAX_TERMS} terms"),
        Some(sum.value()),
    ))
}

fn at_unity(a: f64, b: f64, c: f64) -> Result<f64> {
    let d = c - a - b;
    if d <= 0.0 {
        return Err(Error::domain(
            "hyp2f1",
            format!("series diverges at z = 1 since c - a - b = {d}"),
        ));
    }
    let num = gamma_signed(c)? * gamma_signed(d)?;
    Ok(num * recip_gamma(c - a) * recip_gamma(c - b))
}

fn connection(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let d = c - a - b;
    let w = 1.0 - z;
    let gc = gamma_signed(c)?;
    let f1 = series(a, b, 1.0 - d, w)?;
    let f2 = series(c - a, c - b, 1.0 + d, w)?;
    let t1 = gc * gamma_signed(d)? * recip_gamma(c - a) * recip_gamma(c - b) * f1;
    let t2 = gc * gamma_signed(-d)? * recip_gamma(a) * recip_gamma(b) * w.powf(d) * f2;
    Ok(t1 + t2)
}
