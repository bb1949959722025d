//! End-to-end experiments: simulation to convergence with recorded traces,
//! decay-rate fits, the drifting right-hand-side scenario and batch sweeps.

pub mod instances;
mod rate;
mod simulate;
mod sweep;
mod track;

pub use rate::{fit_rate, RateFit};
pub use simulate::{run, RunSummary, SimulationTrace, TraceRecord};
pub use sweep::{sweep, SweepEntry, SweepRow};
pub use track::{track_varying_b, Drift};

use thiserror::Error;

use crate::flow::FlowError;
use crate::graph::GraphError;
use crate::linalg::LinalgError;
use crate::spectral::SpectralError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("rate fit needs {needed} points above the floor, found {found}")]
    InsufficientData { found: usize, needed: usize },
    #[error("manifolds move under drifting b; the plain variant cannot follow them (use restoring or gains)")]
    ManifoldsMove,
    #[error("invalid drift: {0}")]
    BadDrift(String),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
