use crate::graph::NetworkGraph;
use crate::linalg::DenseVector;
use crate::scalar::Real;

/// One state vector per agent.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentState<T> {
    states: Vec<DenseVector<T>>,
}

impl<T: Real> AgentState<T> {
    pub fn new(states: Vec<DenseVector<T>>) -> Self {
        debug_assert!(states.windows(2).all(|w| w[0].dim() == w[1].dim()));
        Self { states }
    }

    pub fn agents(&self) -> usize {
        self.states.len()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, DenseVector::dim)
    }

    pub fn agent(&self, i: usize) -> &DenseVector<T> {
        &self.states[i]
    }

    pub fn states(&self) -> &[DenseVector<T>] {
        &self.states
    }

    /// `self + h · derivative`, agent by agent.
    pub fn advanced(&self, h: T, derivative: &[DenseVector<T>]) -> Self {
        Self {
            states: self
                .states
                .iter()
                .zip(derivative)
                .map(|(x, d)| x.axpy(h, d))
                .collect(),
        }
    }

    /// All agent vectors concatenated, agent 0 first.
    pub fn stacked(&self) -> DenseVector<T> {
        DenseVector::concat(&self.states)
    }

    pub fn is_finite(&self) -> bool {
        self.states.iter().all(DenseVector::is_finite)
    }

    /// Average of the agent states; the reported consensus value.
    pub fn mean(&self) -> DenseVector<T> {
        let mut acc = DenseVector::zeros(self.dim());
        for x in &self.states {
            acc = acc.add(x);
        }
        acc.scale(T::one() / T::usize(self.agents().max(1)))
    }

    /// `V = ½ Σ_{(i,j)∈E} ‖x_i − x_j‖²`, edges visited in stored order.
    pub fn cost(&self, g: &NetworkGraph) -> T {
        let half = T::of(0.5);
        g.edges()
            .iter()
            .map(|&(i, j)| {
                let d = self.states[i].sub(&self.states[j]);
                d.dot(&d)
            })
            .fold(T::zero(), |s, v| s + v)
            * half
    }

    /// `max_{(i,j)∈E} ‖x_i − x_j‖∞`.
    pub fn spread(&self, g: &NetworkGraph) -> T {
        g.edges()
            .iter()
            .map(|&(i, j)| self.states[i].sub(&self.states[j]).norm_inf())
            .fold(T::zero(), T::max)
    }

    /// `max_i ‖x_i − x‖∞`.
    pub fn distance_to(&self, x: &[T]) -> T {
        self.states
            .iter()
            .map(|s| s.sub(x).norm_inf())
            .fold(T::zero(), T::max)
    }
}
