use rayon::prelude::*;
use serde::Serialize;

use super::instances::{random_graph, random_square_system};
use super::{run, HarnessError, RateFit};
use crate::flow::{FlowConfig, Variant};
use crate::graph::{graph_report, GraphReport, Topology};
use crate::scalar::Real;
use crate::spectral::{spectral_report, SpectralReport};
use crate::tolerances;

/// One sweep job: a random square system of size `n` on a `topology`
/// graph, both drawn from `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub topology: Topology,
    pub n: usize,
    pub seed: u64,
    pub variant: Variant,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow<T> {
    pub entry: SweepEntry,
    pub graph: GraphReport<T>,
    pub spectral: SpectralReport<T>,
    pub converged: bool,
    pub steps: usize,
    pub rate: Option<RateFit<T>>,
    /// Fitted rate above `1.1 ρ`: the initial state barely excites the
    /// slowest mode.
    pub nongeneric: bool,
}

fn sweep_one<T: Real>(entry: SweepEntry, base: &FlowConfig<T>) -> Result<SweepRow<T>, HarnessError> {
    let system = random_square_system::<T>(entry.seed, entry.n);
    let g = random_graph(entry.topology, entry.n, entry.seed);
    let graph = graph_report::<T>(&g)?;
    let spectral = spectral_report(&system, &g)?;
    let config = base.clone().with_variant(entry.variant).with_seed(entry.seed);
    let trace = run(&system, &g, &config)?;
    let band = T::one() + T::of(tolerances::RATE_BAND);
    let nongeneric = trace
        .rate
        .as_ref()
        .is_some_and(|r| r.fitted_rate > band * spectral.rho);
    Ok(SweepRow {
        entry,
        graph,
        spectral,
        converged: trace.converged,
        steps: trace.steps,
        rate: trace.rate,
        nongeneric,
    })
}

/// Spectral analysis plus a simulation for every entry, run in parallel.
/// Results keep the input order; a failing entry yields its error without
/// stopping the others.
pub fn sweep<T: Real>(
    entries: &[SweepEntry],
    base: &FlowConfig<T>,
) -> Vec<Result<SweepRow<T>, HarnessError>> {
    entries.par_iter().map(|&e| sweep_one(e, base)).collect()
}
