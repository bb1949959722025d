use serde::Serialize;

use super::simulate::{oracle_for, simulate, Targets};
use super::{HarnessError, SimulationTrace};
use crate::flow::{Flow, FlowConfig, LinearSystem, Variant};
use crate::graph::NetworkGraph;
use crate::linalg::DenseVector;
use crate::scalar::Real;

/// Sinusoidal drift `b_i(t) = b_i + amplitude · sin(omega · t)` applied to
/// every row, held at its value from `freeze_at` onwards when set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Drift<T> {
    pub amplitude: T,
    pub omega: T,
    pub freeze_at: Option<T>,
}

impl<T: Real> Drift<T> {
    pub fn new(amplitude: T, omega: T) -> Self {
        Self {
            amplitude,
            omega,
            freeze_at: None,
        }
    }

    pub fn frozen_at(mut self, t: T) -> Self {
        self.freeze_at = Some(t);
        self
    }

    fn effective_time(&self, t: T) -> T {
        self.freeze_at.map_or(t, |f| t.min(f))
    }

    /// Offset added to every row at time `t`.
    pub fn offset(&self, t: T) -> T {
        self.amplitude * (self.omega * self.effective_time(t)).sin()
    }

    fn is_still(&self) -> bool {
        self.amplitude == T::zero()
    }
}

struct Drifting<'a, T> {
    system: &'a LinearSystem<T>,
    drift: Drift<T>,
}

impl<T: Real> Drifting<'_, T> {
    fn stacked_rhs_at(&self, t: T) -> Vec<T> {
        let offset = self.drift.offset(t);
        self.system.stacked_rhs().iter().map(|&b| b + offset).collect()
    }
}

impl<T: Real> Targets<T> for Drifting<'_, T> {
    fn rhs_at(&self, t: T) -> Vec<DenseVector<T>> {
        let offset = self.drift.offset(t);
        self.system
            .rhs()
            .iter()
            .map(|b| DenseVector::new(b.iter().map(|&v| v + offset).collect()).expect("finite drift"))
            .collect()
    }

    fn oracle_at(&self, t: T) -> Option<DenseVector<T>> {
        oracle_for(self.system, &self.stacked_rhs_at(t), &mut Vec::new())
    }

    fn moving(&self, t: T) -> bool {
        !self.drift.is_still() && self.drift.freeze_at.is_none_or(|f| t < f)
    }
}

/// Runs the flow against drifting manifolds. Records carry the lag
/// `max_i ‖x_i − x*(t)‖∞` against the instantaneous solution, and the
/// trace reports its maximum over the last 30% of records.
///
/// The run cannot converge while `b` still moves; with `freeze_at` set it
/// continues under the frozen `b` until the usual convergence test holds.
/// A zero amplitude reproduces [`run`](super::run) exactly.
pub fn track_varying_b<T: Real>(
    system: &LinearSystem<T>,
    g: &NetworkGraph,
    config: &FlowConfig<T>,
    drift: Drift<T>,
) -> Result<SimulationTrace<T>, HarnessError> {
    if !(drift.amplitude.is_finite() && drift.omega.is_finite()) {
        return Err(HarnessError::BadDrift("amplitude and omega must be finite".into()));
    }
    if drift.freeze_at.is_some_and(|f| f.is_nan() || f < T::zero()) {
        return Err(HarnessError::BadDrift("freeze time must be non-negative".into()));
    }
    if drift.is_still() {
        return super::run(system, g, config);
    }
    if config.variant == Variant::Plain {
        return Err(HarnessError::ManifoldsMove);
    }
    let flow = Flow::new(system, g, config.clone())?;
    let mut warnings = Vec::new();
    if !system.is_nonsingular() {
        warnings.push("no instantaneous oracle: A is not square and nonsingular".to_string());
    }
    simulate(&flow, &Drifting { system, drift }, warnings)
}
