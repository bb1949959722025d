use serde::Serialize;

use super::{HarnessError, SimulationTrace};
use crate::scalar::Real;
use crate::tolerances;

/// Least-squares exponential decay fit of the oracle distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateFit<T> {
    /// Negated slope of `ln(oracle_dist)` against `t`.
    pub fitted_rate: T,
    /// First and last step index of the fitted window.
    pub window: (usize, usize),
    pub r_squared: T,
}

/// Fits `ln(oracle_dist) ≈ c − rate · t` over the tail of the trace.
///
/// Only records with `oracle_dist > 1e-13` are used, at least 30 of them;
/// the first 20% of those are dropped as transient.
pub fn fit_rate<T: Real>(trace: &SimulationTrace<T>) -> Result<RateFit<T>, HarnessError> {
    let floor = T::of(tolerances::RATE_FIT_FLOOR);
    let usable: Vec<(usize, f64, f64)> = trace
        .records
        .iter()
        .filter_map(|r| match r.oracle_dist {
            Some(d) if d > floor => Some((r.step, r.t.f64(), d.f64().ln())),
            _ => None,
        })
        .collect();
    if usable.len() < tolerances::RATE_FIT_MIN_POINTS {
        return Err(HarnessError::InsufficientData {
            found: usable.len(),
            needed: tolerances::RATE_FIT_MIN_POINTS,
        });
    }
    let skip = (tolerances::RATE_FIT_TRANSIENT * usable.len() as f64).floor() as usize;
    let window = &usable[skip..];
    let count = window.len() as f64;
    let mean_t = window.iter().map(|p| p.1).sum::<f64>() / count;
    let mean_y = window.iter().map(|p| p.2).sum::<f64>() / count;
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for &(_, t, y) in window {
        stt += (t - mean_t) * (t - mean_t);
        sty += (t - mean_t) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    let slope = sty / stt;
    // A flat series is fitted exactly by its mean.
    let r_squared = if syy == 0.0 { 1.0 } else { sty * sty / (stt * syy) };
    Ok(RateFit {
        fitted_rate: T::of(0.0 - slope),
        window: (window[0].0, window[window.len() - 1].0),
        r_squared: T::of(r_squared),
    })
}
