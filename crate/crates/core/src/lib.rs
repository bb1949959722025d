//! Distributed solution of `A x = b` by projected consensus gradient flow.
//!
//! A network of agents, one per row block of `A`, each keeps its state on
//! its own affine constraint set while a graph-coupled consensus term drives
//! all states together; the common limit solves the equation. The crate
//! provides the dense kernel, graphs and their Laplacians, the flow variants
//! and their integration, spectral analysis of the stacked dynamics, and an
//! experiment harness with stable output formats.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar.

pub mod flow;
pub mod graph;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod scalar;
pub mod spectral;
pub mod tolerances;

pub use graph::NetworkGraph;
pub use scalar::Real;

pub type Matrix = linalg::DenseMatrix<f64>;
pub type Vector = linalg::DenseVector<f64>;
pub type Eigen = linalg::EigenResult<f64>;
pub type System = flow::LinearSystem<f64>;
pub type Config = flow::FlowConfig<f64>;
pub type State = flow::AgentState<f64>;
pub type Trace = harness::SimulationTrace<f64>;
pub type SpectralReport = spectral::SpectralReport<f64>;
pub type GraphReport = graph::GraphReport<f64>;

pub type Matrix32 = linalg::DenseMatrix<f32>;
pub type Vector32 = linalg::DenseVector<f32>;
pub type System32 = flow::LinearSystem<f32>;
pub type Config32 = flow::FlowConfig<f32>;
