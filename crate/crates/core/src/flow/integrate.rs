use crate::graph::NetworkGraph;
use crate::linalg::DenseVector;
use crate::scalar::Real;

use super::{AgentState, FlowConfig, FlowError, Integrator, Variant};

/// Default step `h = 1 / (2 α d_max + c)`.
///
/// `λ_max(L) ≤ 2 d_max`, so `h · λ_max` of the linearized flow stays below
/// one. `c` is 0.5 for the plain flow, 1 for the restoring flow and
/// `max α_i` for the gains flow; `α` is 1 except for the gains flow.
pub fn auto_step<T: Real>(g: &NetworkGraph, config: &FlowConfig<T>) -> T {
    let d_max = T::usize(g.max_degree());
    let two = T::of(2.0);
    let (alpha, c) = match config.variant {
        Variant::Plain => (T::one(), T::of(0.5)),
        Variant::Restoring => (T::one(), T::one()),
        Variant::Gains if config.alpha_i.is_empty() => (config.alpha, T::one()),
        Variant::Gains => (
            config.alpha,
            config.alpha_i.iter().copied().fold(T::zero(), T::max),
        ),
    };
    T::one() / (two * alpha * d_max + c)
}

/// One fixed step of size `h` from time `t`.
///
/// `f(t, x)` returns the per-agent derivative. Fails with `NonFinite` when
/// the new state has left the finite range.
pub fn step<T, F>(
    state: &AgentState<T>,
    t: T,
    h: T,
    integrator: Integrator,
    mut f: F,
) -> Result<AgentState<T>, FlowError>
where
    T: Real,
    F: FnMut(T, &AgentState<T>) -> Vec<DenseVector<T>>,
{
    let next = match integrator {
        Integrator::Euler => state.advanced(h, &f(t, state)),
        Integrator::Rk4 => {
            let half = T::of(0.5);
            let k1 = f(t, state);
            let k2 = f(t + half * h, &state.advanced(half * h, &k1));
            let k3 = f(t + half * h, &state.advanced(half * h, &k2));
            let k4 = f(t + h, &state.advanced(h, &k3));
            let sixth = h / T::of(6.0);
            let two = T::of(2.0);
            let combined: Vec<DenseVector<T>> = (0..state.agents())
                .map(|i| {
                    k1[i]
                        .axpy(two, &k2[i])
                        .axpy(two, &k3[i])
                        .add(&k4[i])
                })
                .collect();
            state.advanced(sixth, &combined)
        }
    };
    if !next.is_finite() {
        return Err(FlowError::NonFinite { time: (t + h).f64() });
    }
    Ok(next)
}
