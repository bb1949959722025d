use serde::Serialize;

use super::rate::{fit_rate, RateFit};
use super::HarnessError;
use crate::flow::{step, AgentState, Flow, FlowConfig, LinearSystem};
use crate::graph::NetworkGraph;
use crate::linalg::{direct_solve, DenseVector};
use crate::scalar::Real;
use crate::tolerances;

/// One logged step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord<T> {
    pub step: usize,
    pub t: T,
    /// `V = ½ Σ_{(i,j)∈E} ‖x_i − x_j‖²`.
    pub cost_v: T,
    /// `max_{(i,j)∈E} ‖x_i − x_j‖∞`.
    pub spread: T,
    /// `max_i ‖A_i x_i − b_i‖∞`.
    pub residual: T,
    /// `max_i ‖x_i − x*‖∞`; absent without an oracle. Under drifting `b`
    /// the oracle is the instantaneous solution `x*(t)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_dist: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace<T> {
    pub records: Vec<TraceRecord<T>>,
    pub converged: bool,
    pub steps: usize,
    pub step_size: T,
    pub final_state: AgentState<T>,
    /// `x*` for square nonsingular `A` (at the final time when `b` drifts).
    pub oracle: Option<DenseVector<T>>,
    /// Largest manifold residual over every step, recorded or not.
    pub max_residual: T,
    /// Largest one-step increase of `V` over the run.
    pub max_cost_increase: T,
    pub rate: Option<RateFit<T>>,
    /// Maximum `oracle_dist` over the last 30% of records.
    pub steady_state_lag: Option<T>,
    pub warnings: Vec<String>,
}

impl<T: Real> SimulationTrace<T> {
    pub fn final_time(&self) -> T {
        T::usize(self.steps) * self.step_size
    }

    /// Average of the agent states.
    pub fn consensus(&self) -> DenseVector<T> {
        self.final_state.mean()
    }

    pub fn summary(&self) -> RunSummary<T> {
        let last = self.records.last().expect("a trace holds at least the initial record");
        let consensus = self.consensus();
        RunSummary {
            converged: self.converged,
            steps: self.steps,
            final_time: self.final_time(),
            step_size: self.step_size,
            spread: last.spread,
            residual: last.residual,
            cost_v: last.cost_v,
            oracle_error: self.oracle.as_ref().map(|x| consensus.sub(x).norm_inf()),
            fitted_rate: self.rate.as_ref().map(|r| r.fitted_rate),
            fit_r_squared: self.rate.as_ref().map(|r| r.r_squared),
            steady_state_lag: self.steady_state_lag,
            max_residual: self.max_residual,
            consensus: consensus.into_vec(),
            warnings: self.warnings.clone(),
        }
    }
}

/// Terminal outcome of a run. `fitted_rate` is the decay rate of the
/// oracle distance (not of `V`, which decays twice as fast).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary<T> {
    pub converged: bool,
    pub steps: usize,
    pub final_time: T,
    pub step_size: T,
    pub spread: T,
    pub residual: T,
    pub cost_v: T,
    pub oracle_error: Option<T>,
    pub fitted_rate: Option<T>,
    pub fit_r_squared: Option<T>,
    pub steady_state_lag: Option<T>,
    pub max_residual: T,
    pub consensus: Vec<T>,
    pub warnings: Vec<String>,
}

/// Manifold targets and oracle as functions of time.
pub(super) trait Targets<T> {
    fn rhs_at(&self, t: T) -> Vec<DenseVector<T>>;
    fn oracle_at(&self, t: T) -> Option<DenseVector<T>>;
    /// Whether the targets still move at time `t`.
    fn moving(&self, t: T) -> bool;
}

struct Fixed<T> {
    rhs: Vec<DenseVector<T>>,
    oracle: Option<DenseVector<T>>,
}

impl<T: Real> Targets<T> for Fixed<T> {
    fn rhs_at(&self, _t: T) -> Vec<DenseVector<T>> {
        self.rhs.clone()
    }

    fn oracle_at(&self, _t: T) -> Option<DenseVector<T>> {
        self.oracle.clone()
    }

    fn moving(&self, _t: T) -> bool {
        false
    }
}

/// `x*` when `A` is square and nonsingular; a warning when square but
/// singular.
pub(super) fn oracle_for<T: Real>(system: &LinearSystem<T>, b: &[T], warnings: &mut Vec<String>) -> Option<DenseVector<T>> {
    if !system.is_square() {
        return None;
    }
    match direct_solve(&system.matrix(), b) {
        Ok(x) => Some(x),
        Err(_) => {
            warnings.push("A is square but singular; no oracle solution".to_string());
            None
        }
    }
}

/// Integrates the configured flow until consensus and manifold residual
/// both fall below `convergence_tol`, or `max_steps` is reached.
///
/// Non-convergence is reported through `converged = false`, not as an
/// error.
pub fn run<T: Real>(
    system: &LinearSystem<T>,
    g: &NetworkGraph,
    config: &FlowConfig<T>,
) -> Result<SimulationTrace<T>, HarnessError> {
    let flow = Flow::new(system, g, config.clone())?;
    let mut warnings = Vec::new();
    if !system.is_full_row_rank() {
        warnings.push(format!(
            "A is rank deficient (rank {} < {} rows); consensus only if Ax = b is consistent",
            system.rank(),
            system.total_rows()
        ));
    }
    let oracle = oracle_for(system, &system.stacked_rhs(), &mut warnings);
    let targets = Fixed {
        rhs: system.rhs().to_vec(),
        oracle,
    };
    simulate(&flow, &targets, warnings)
}

pub(super) fn simulate<T: Real>(
    flow: &Flow<'_, T>,
    targets: &impl Targets<T>,
    warnings: Vec<String>,
) -> Result<SimulationTrace<T>, HarnessError> {
    let config = flow.config();
    let g = flow.graph();
    let h = flow.step_size();
    let tol = config.convergence_tol;
    let time = |k: usize| T::usize(k) * h;

    let mut state = flow.initialize();
    let mut records = Vec::new();
    let mut rhs = targets.rhs_at(T::zero());
    let mut residual = flow.manifold_residual(&state, &rhs);
    let mut cost = state.cost(g);
    let mut max_residual = residual;
    let mut max_cost_increase = T::neg_infinity();
    let mut k = 0usize;

    let record = |k: usize, state: &AgentState<T>, cost: T, residual: T| TraceRecord {
        step: k,
        t: time(k),
        cost_v: cost,
        spread: state.spread(g),
        residual,
        oracle_dist: targets.oracle_at(time(k)).map(|x| state.distance_to(&x)),
    };
    records.push(record(0, &state, cost, residual));

    let done = |k: usize, state: &AgentState<T>, residual: T| {
        !targets.moving(time(k)) && state.spread(g) <= tol && residual <= tol
    };
    let mut converged = done(0, &state, residual);
    while !converged && k < config.max_steps {
        let next = step(&state, time(k), h, config.integrator, |t, x| {
            flow.derivative(x, &targets.rhs_at(t))
        })
        .map_err(HarnessError::from)?;
        k += 1;
        state = next;
        rhs = targets.rhs_at(time(k));
        residual = flow.manifold_residual(&state, &rhs);
        let next_cost = state.cost(g);
        max_residual = max_residual.max(residual);
        max_cost_increase = max_cost_increase.max(next_cost - cost);
        cost = next_cost;
        converged = done(k, &state, residual);
        if k.is_multiple_of(config.record_every) || converged || k == config.max_steps {
            records.push(record(k, &state, cost, residual));
        }
    }

    let oracle = targets.oracle_at(time(k));
    let mut trace = SimulationTrace {
        steady_state_lag: steady_state_lag(&records),
        records,
        converged,
        steps: k,
        step_size: h,
        final_state: state,
        oracle,
        max_residual,
        max_cost_increase: if k == 0 { T::zero() } else { max_cost_increase },
        rate: None,
        warnings,
    };
    trace.rate = fit_rate(&trace).ok();
    Ok(trace)
}

fn steady_state_lag<T: Real>(records: &[TraceRecord<T>]) -> Option<T> {
    let window = T::tol(tolerances::STEADY_STATE_WINDOW).f64();
    let skip = ((1.0 - window) * records.len() as f64).floor() as usize;
    records[skip.min(records.len().saturating_sub(1))..]
        .iter()
        .map(|r| r.oracle_dist)
        .try_fold(T::zero(), |acc, d| d.map(|d| acc.max(d)))
}
