//! Projected consensus dynamics.
//!
//! Every agent owns one row block `A_i x = b_i` of the equation and a state
//! `x_i` on the affine manifold `{x : A_i x = b_i}`. The plain flow moves
//! each state along the neighbor disagreement projected onto the tangent
//! space of its manifold; the restoring flow adds a pull back onto the
//! manifold so that initial states may be arbitrary.

mod config;
mod dynamics;
mod integrate;
mod projection;
mod state;
mod system;

pub use config::{FlowConfig, Init, Integrator, StepSize, Variant};
pub use dynamics::{rhs_gains, rhs_plain, rhs_restoring, Flow};
pub use integrate::{auto_step, step};
pub use projection::{projection_for_block, Projection};
pub use state::AgentState;
pub use system::LinearSystem;

use thiserror::Error;

use crate::graph::GraphError;
use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("row {row} of block {block} is zero")]
    ZeroRow { block: usize, row: usize },
    #[error("block {block} is rank deficient")]
    RankDeficientBlock { block: usize },
    #[error("system is rank deficient (rank {rank} < {rows} rows)")]
    RankDeficient { rank: usize, rows: usize },
    #[error("system has {rows} rows but only {unknowns} unknowns")]
    TooManyRows { rows: usize, unknowns: usize },
    #[error("block {block} has {got} columns, expected {expected}")]
    BlockShape {
        block: usize,
        expected: usize,
        got: usize,
    },
    #[error("graph has {vertices} vertices but the system has {agents} row blocks")]
    MismatchedTopology { vertices: usize, agents: usize },
    #[error("communication graph is disconnected")]
    Disconnected,
    #[error("gains must be positive: {0}")]
    BadGain(String),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("state became non-finite at t = {time}; the step size is likely too large")]
    NonFinite { time: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
