use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{is_connected, NetworkGraph};
use crate::linalg::DenseVector;
use crate::scalar::Real;

use super::{
    auto_step, projection_for_block, AgentState, FlowConfig, FlowError, Init, LinearSystem,
    Projection, StepSize, Variant,
};

/// `Σ_{j∈N_i} (x_i − x_j)`, neighbors in ascending index order.
fn disagreement<T: Real>(state: &AgentState<T>, g: &NetworkGraph, i: usize) -> DenseVector<T> {
    let xi = state.agent(i);
    let mut acc = DenseVector::zeros(xi.dim());
    for &j in g.neighbors(i) {
        acc = acc.add(&xi.sub(state.agent(j)));
    }
    acc
}

/// Plain projected flow: `ẋ_i = −P_i Σ_{j∈N_i} (x_i − x_j)`.
pub fn rhs_plain<T: Real>(
    state: &AgentState<T>,
    g: &NetworkGraph,
    projections: &[Projection<T>],
) -> Vec<DenseVector<T>> {
    (0..state.agents())
        .map(|i| projections[i].project(&disagreement(state, g, i)).scale(-T::one()))
        .collect()
}

/// Restoring flow: the plain derivative plus `−A_i⁺ (A_i x_i − b_i)`, which
/// for a single row is `−a_i (a_iᵀ x_i − b_i) / (a_iᵀ a_i)`.
pub fn rhs_restoring<T: Real>(
    state: &AgentState<T>,
    g: &NetworkGraph,
    projections: &[Projection<T>],
    rhs: &[DenseVector<T>],
) -> Vec<DenseVector<T>> {
    rhs_plain(state, g, projections)
        .into_iter()
        .enumerate()
        .map(|(i, d)| d.sub(&projections[i].normal_offset(state.agent(i), &rhs[i])))
        .collect()
}

/// Gains flow: `−α P_i Σ (x_i − x_j) − α_i A_i⁺ (A_i x_i − b_i)`.
pub fn rhs_gains<T: Real>(
    state: &AgentState<T>,
    g: &NetworkGraph,
    projections: &[Projection<T>],
    rhs: &[DenseVector<T>],
    alpha: T,
    alpha_i: &[T],
) -> Result<Vec<DenseVector<T>>, FlowError> {
    if !alpha.is_positive_finite() {
        return Err(FlowError::BadGain(format!("alpha = {alpha}")));
    }
    if alpha_i.len() != state.agents() || alpha_i.iter().any(|a| !a.is_positive_finite()) {
        return Err(FlowError::BadGain(format!("alpha_i = {alpha_i:?}")));
    }
    Ok((0..state.agents())
        .map(|i| {
            let consensus = projections[i].project(&disagreement(state, g, i)).scale(-alpha);
            let offset = projections[i].normal_offset(state.agent(i), &rhs[i]);
            consensus.axpy(-alpha_i[i], &offset)
        })
        .collect())
}

/// A validated flow: system, graph, projectors, gains and step size.
#[derive(Debug, Clone)]
pub struct Flow<'a, T> {
    system: &'a LinearSystem<T>,
    graph: &'a NetworkGraph,
    projections: Vec<Projection<T>>,
    config: FlowConfig<T>,
    restoring_gains: Vec<T>,
    step: T,
}

impl<'a, T: Real> Flow<'a, T> {
    /// Setup checks: configuration, one row block per vertex, connectivity,
    /// and a projector for every block.
    pub fn new(
        system: &'a LinearSystem<T>,
        graph: &'a NetworkGraph,
        config: FlowConfig<T>,
    ) -> Result<Self, FlowError> {
        config.validate()?;
        if graph.vertex_count() != system.agents() {
            return Err(FlowError::MismatchedTopology {
                vertices: graph.vertex_count(),
                agents: system.agents(),
            });
        }
        if !is_connected(graph) {
            return Err(FlowError::Disconnected);
        }
        let projections = system
            .blocks()
            .iter()
            .enumerate()
            .map(|(k, b)| {
                projection_for_block(b).map_err(|e| match e {
                    FlowError::RankDeficientBlock { .. } => FlowError::RankDeficientBlock { block: k },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let restoring_gains = config.restoring_gains(system.agents())?;
        let step = match config.step {
            StepSize::Auto => auto_step(graph, &config),
            StepSize::Fixed(h) => h,
        };
        Ok(Self {
            system,
            graph,
            projections,
            config,
            restoring_gains,
            step,
        })
    }

    pub fn system(&self) -> &LinearSystem<T> {
        self.system
    }

    pub fn graph(&self) -> &NetworkGraph {
        self.graph
    }

    pub fn projections(&self) -> &[Projection<T>] {
        &self.projections
    }

    pub fn config(&self) -> &FlowConfig<T> {
        &self.config
    }

    pub fn step_size(&self) -> T {
        self.step
    }

    /// Derivative of every agent for manifold targets `rhs`.
    pub fn derivative(&self, state: &AgentState<T>, rhs: &[DenseVector<T>]) -> Vec<DenseVector<T>> {
        match self.config.variant {
            Variant::Plain => rhs_plain(state, self.graph, &self.projections),
            Variant::Restoring => rhs_restoring(state, self.graph, &self.projections, rhs),
            Variant::Gains => rhs_gains(
                state,
                self.graph,
                &self.projections,
                rhs,
                self.config.alpha,
                &self.restoring_gains,
            )
            .expect("gains validated at setup"),
        }
    }

    /// Initial state for the configured `Init`, drawing per-agent noise from
    /// a ChaCha stream seeded with `config.seed`.
    pub fn initialize(&self) -> AgentState<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        let n = self.system.unknowns();
        let mut noise = || -> Vec<T> { (0..n).map(|_| T::of(rng.random_range(-1.0..=1.0))).collect() };
        let states = self
            .projections
            .iter()
            .zip(self.system.rhs())
            .map(|(p, b)| match self.config.init {
                Init::MinNorm => p.min_norm_point(b),
                Init::TangentNoise => p.min_norm_point(b).add(&p.project(&noise())),
                Init::FreeRandom => DenseVector::from_raw(noise()),
            })
            .collect();
        AgentState::new(states)
    }

    /// `max_i ‖A_i x_i − b_i‖∞`.
    pub fn manifold_residual(&self, state: &AgentState<T>, rhs: &[DenseVector<T>]) -> T {
        self.system
            .blocks()
            .iter()
            .zip(rhs)
            .zip(state.states())
            .map(|((a, b), x)| a.matvec(x).expect("dimension checked").sub(b).norm_inf())
            .fold(T::zero(), T::max)
    }
}
