use rayon::prelude::*;

use super::config::{Axis, Curve, Experiment};
use crate::association::association_probabilities;
use crate::coverage::{kappa_to_theta, outage_probability, Variant};
use crate::error::{Error, Result};
use crate::mcsim::{simulate, simulate_batch, Estimate, SimOutput};
use crate::scenario::Scenario;

/// One output row: a curve value at a grid point, or a summary row when
/// `axis_value` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub axis_value: Option<f64>,
    pub curve: String,
    pub value: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub n: Option<u64>,
}

impl ResultRow {
    fn point(axis_value: f64, curve: Curve, value: f64) -> Self {
        ResultRow {
            axis_value: Some(axis_value),
            curve: curve.name().to_string(),
            value,
            ci_low: None,
            ci_high: None,
            n: None,
        }
    }

    fn estimate(axis_value: f64, curve: Curve, e: Estimate) -> Self {
        ResultRow {
            axis_value: Some(axis_value),
            curve: curve.name().to_string(),
            value: e.value,
            ci_low: Some(e.ci_low),
            ci_high: Some(e.ci_high),
            n: Some(e.n),
        }
    }
}

/// Rows in grid order, followed by MSE rows, plus messages for grid points
/// whose evaluation failed (their rows carry NaN).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
    pub failures: Vec<String>,
}

impl ResultTable {
    /// Values of one curve in grid order.
    pub fn curve(&self, name: &str) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.curve == name)
            .filter_map(|r| r.axis_value.map(|x| (x, r.value)))
            .collect()
    }

    /// MSE rows as (pair name, value).
    pub fn mse(&self) -> Vec<(String, f64)> {
        self.rows
            .iter()
            .filter(|r| r.axis_value.is_none() && r.curve.starts_with("MSE:"))
            .map(|r| (r.curve.clone(), r.value))
            .collect()
    }

    /// MSE rows that are above `gate` or not finite.
    pub fn gate_failures(&self, gate: f64) -> Vec<(String, f64)> {
        self.mse().into_iter().filter(|(_, v)| !(*v <= gate)).collect()
    }
}

/// Theory/simulation pairs that an MSE row can compare.
const PAIRS: [(Curve, Curve, &str); 3] = [
    (Curve::PtTheory, Curve::PtSim, "MSE:P_T"),
    (Curve::RcTheory, Curve::RcSim, "MSE:R_C"),
    (Curve::PlTheory, Curve::PlSim, "MSE:P_L"),
];

fn thresholds(e: &Experiment) -> (f64, f64) {
    let theta = 10f64.powf(e.sweep.theta_db / 10.0);
    (theta, e.sweep.kappa)
}

fn theory_value(curve: Curve, e: &Experiment, variant: Variant) -> Result<f64> {
    let sc = e.scenario()?;
    let (theta, kappa) = thresholds(e);
    match curve {
        Curve::PtTheory => outage_probability(theta, variant, &sc),
        Curve::RcTheory => {
            let t = kappa_to_theta(kappa, sc.radio.bandwidth_hz);
            Ok(1.0 - outage_probability(t, variant, &sc)?)
        }
        Curve::PlTheory => Ok(association_probabilities(&sc)?.p_l),
        _ => unreachable!("not a theory curve"),
    }
}

fn sim_value(curve: Curve, e: &Experiment, out: &SimOutput) -> Estimate {
    let (theta, kappa) = thresholds(e);
    match curve {
        Curve::PtSim => out.outage(theta),
        Curve::RcSim => out.rate_coverage(kappa),
        Curve::PlSim => out.association(),
        _ => unreachable!("not a simulation curve"),
    }
}

fn failed_row(x: f64, curve: Curve, err: &Error, failures: &mut Vec<String>) -> ResultRow {
    let msg = format!("{} at {x}: {err}", curve.name());
    log::warn!("{msg}");
    failures.push(msg);
    ResultRow::point(x, curve, f64::NAN)
}

/// Runs every requested curve over the grid. Grid points are evaluated in
/// parallel; rows come out in grid order.
pub fn run_experiment(e: &Experiment) -> Result<ResultTable> {
    e.validate()?;
    let variant: Variant = e.sweep.variant.into();
    let curves = &e.sweep.curves;
    let wants_sim = curves.iter().any(|c| c.is_sim());
    let values = &e.sweep.values;

    let points: Vec<Result<Experiment>> = values.iter().map(|&x| e.at(x)).collect();

    // A threshold sweep leaves the network unchanged, so one simulation
    // serves the whole grid. Other axes keep the road and α_L fixed, so
    // the grid shares traffic in a single batch.
    let threshold_axis = matches!(e.sweep.axis, Axis::ThetaDb | Axis::Kappa);
    let sims: Vec<Option<std::result::Result<SimOutput, Error>>> = if !wants_sim {
        values.iter().map(|_| None).collect()
    } else if threshold_axis {
        let out = simulate(&e.scenario()?, &e.sim_config());
        values.iter().map(|_| Some(out.clone())).collect()
    } else {
        let scs: Vec<Result<Scenario>> = points
            .iter()
            .map(|p| p.as_ref().map_err(Clone::clone)?.scenario())
            .collect();
        let ok: Vec<Scenario> = scs.iter().filter_map(|s| s.as_ref().ok().cloned()).collect();
        let mut batch = simulate_batch(&ok, &e.sim_config()).map(|v| v.into_iter());
        scs.iter()
            .map(|s| {
                Some(match (s, &mut batch) {
                    (Err(err), _) => Err(err.clone()),
                    (Ok(_), Ok(it)) => Ok(it.next().expect("one output per scenario")),
                    (Ok(_), Err(err)) => Err(err.clone()),
                })
            })
            .collect()
    };

    let per_point: Vec<(Vec<ResultRow>, Vec<String>)> = values
        .par_iter()
        .zip(points.par_iter())
        .zip(sims.par_iter())
        .map(|((&x, point), sim)| {
            let mut rows = Vec::new();
            let mut failures = Vec::new();
            let point = match point {
                Ok(p) => p,
                Err(err) => {
                    for &c in curves.iter().filter(|c| **c != Curve::Mse) {
                        rows.push(failed_row(x, c, err, &mut failures));
                    }
                    return (rows, failures);
                }
            };
            for &c in curves {
                if c == Curve::Mse {
                    continue;
                }
                if c.is_theory() {
                    match theory_value(c, point, variant) {
                        Ok(v) => rows.push(ResultRow::point(x, c, v)),
                        Err(err) => rows.push(failed_row(x, c, &err, &mut failures)),
                    }
                } else {
                    match sim.as_ref().expect("simulation requested") {
                        Ok(out) => rows.push(ResultRow::estimate(x, c, sim_value(c, point, out))),
                        Err(err) => rows.push(failed_row(x, c, err, &mut failures)),
                    }
                }
            }
            (rows, failures)
        })
        .collect();

    let mut table = ResultTable::default();
    for (rows, failures) in per_point {
        table.rows.extend(rows);
        table.failures.extend(failures);
    }
    if curves.contains(&Curve::Mse) {
        for (theory, sim, name) in PAIRS {
            if curves.contains(&theory) && curves.contains(&sim) {
                let a = table.curve(theory.name());
                let b = table.curve(sim.name());
                let mse = mean_squared_difference(
                    &a.iter().map(|p| p.1).collect::<Vec<_>>(),
                    &b.iter().map(|p| p.1).collect::<Vec<_>>(),
                );
                table.rows.push(ResultRow {
                    axis_value: None,
                    curve: name.to_string(),
                    value: mse,
                    ci_low: None,
                    ci_high: None,
                    n: Some(a.len() as u64),
                });
            }
        }
    }
    Ok(table)
}

/// Mean of squared pairwise differences; NaN when lengths differ or empty.
pub fn mean_squared_difference(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() || a.is_empty() {
        return f64::NAN;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64
}
