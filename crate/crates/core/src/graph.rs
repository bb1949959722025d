//! Undirected communication graphs: Laplacian, connectivity, diameter and
//! algebraic connectivity.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{sym_eigen, DenseMatrix, LinalgError};
use crate::scalar::Real;

/// Probability with which `random_connected` adds each non-tree edge.
pub const DEFAULT_EDGE_PROBABILITY: f64 = 0.3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Undirected simple graph on vertices `0..vertex_count`.
///
/// Edges are stored as `(min, max)` pairs in insertion order; neighbor lists
/// are kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl NetworkGraph {
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        let mut neighbors = vec![Vec::new(); vertex_count];
        for &(i, j) in edges {
            if i >= vertex_count || j >= vertex_count {
                return Err(GraphError::VertexOutOfRange(i, j, vertex_count));
            }
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            let e = (i.min(j), i.max(j));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(i, j));
            }
            normalized.push(e);
            neighbors[i].push(j);
            neighbors[j].push(i);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Self {
            vertex_count,
            edges: normalized,
            neighbors,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count];
        let mut queue = VecDeque::from([source]);
        dist[source] = Some(0);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices have a distance");
            for &w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// `L = D − Adj`.
pub fn laplacian<T: Real>(g: &NetworkGraph) -> DenseMatrix<T> {
    let n = g.vertex_count();
    let mut l = DenseMatrix::zeros(n, n);
    for v in 0..n {
        l.set(v, v, T::usize(g.degree(v)));
    }
    for &(i, j) in g.edges() {
        l.set(i, j, -T::one());
        l.set(j, i, -T::one());
    }
    l
}

/// Breadth-first reachability from vertex 0. The empty graph is not connected.
pub fn is_connected(g: &NetworkGraph) -> bool {
    g.vertex_count() > 0 && g.bfs_distances(0).iter().all(Option::is_some)
}

/// Longest shortest path, by BFS from every vertex.
pub fn diameter(g: &NetworkGraph) -> Result<usize, GraphError> {
    if !is_connected(g) {
        return Err(GraphError::Disconnected);
    }
    Ok((0..g.vertex_count())
        .flat_map(|s| g.bfs_distances(s))
        .map(|d| d.expect("connected"))
        .max()
        .unwrap_or(0))
}

/// Algebraic connectivity: second-smallest Laplacian eigenvalue.
pub fn lambda2<T: Real>(g: &NetworkGraph) -> Result<T, GraphError> {
    if !is_connected(g) {
        return Err(GraphError::Disconnected);
    }
    if g.vertex_count() < 2 {
        return Err(GraphError::BadParam(
            "algebraic connectivity needs at least two vertices".into(),
        ));
    }
    Ok(sym_eigen(&laplacian::<T>(g))?.values[1])
}

/// Connectivity summary with the algebraic-connectivity bounds.
///
/// `upper_bound` is `n`, the bound for the combinatorial Laplacian, attained
/// exactly by complete graphs. `normalized_upper_bound = n/(n−1)` is the
/// normalized-Laplacian figure, reported for reference and never asserted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphReport<T> {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub connected: bool,
    pub diameter: Option<usize>,
    pub lambda2: Option<T>,
    pub lower_bound: Option<T>,
    pub upper_bound: Option<T>,
    pub normalized_upper_bound: Option<T>,
}

pub fn graph_report<T: Real>(g: &NetworkGraph) -> Result<GraphReport<T>, GraphError> {
    let n = g.vertex_count();
    let connected = is_connected(g);
    let mut report = GraphReport {
        vertex_count: n,
        edge_count: g.edges().len(),
        connected,
        diameter: None,
        lambda2: None,
        lower_bound: None,
        upper_bound: None,
        normalized_upper_bound: None,
    };
    if !connected {
        return Ok(report);
    }
    let d = diameter(g)?;
    report.diameter = Some(d);
    if n >= 2 {
        let nf = T::usize(n);
        report.lambda2 = Some(lambda2(g)?);
        report.lower_bound = Some(T::of(4.0) / (nf * T::usize(d)));
        report.upper_bound = Some(nf);
        report.normalized_upper_bound = Some(nf / (nf - T::one()));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Path,
    Cycle,
    Complete,
    Star,
    RandomConnected,
}

impl Topology {
    pub const ALL: [Topology; 5] = [
        Topology::Path,
        Topology::Cycle,
        Topology::Complete,
        Topology::Star,
        Topology::RandomConnected,
    ];
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::Path => "path",
            Topology::Cycle => "cycle",
            Topology::Complete => "complete",
            Topology::Star => "star",
            Topology::RandomConnected => "random_connected",
        })
    }
}

impl FromStr for Topology {
    type Err = GraphError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "path" => Ok(Topology::Path),
            "cycle" => Ok(Topology::Cycle),
            "complete" => Ok(Topology::Complete),
            "star" => Ok(Topology::Star),
            "random_connected" | "random-connected" | "random" => Ok(Topology::RandomConnected),
            other => Err(GraphError::BadParam(format!("unknown topology '{other}'"))),
        }
    }
}

/// Deterministic graph family member; `seed` only affects `RandomConnected`.
pub fn generate(topology: Topology, n: usize, seed: u64) -> Result<NetworkGraph, GraphError> {
    generate_with_probability(topology, n, seed, DEFAULT_EDGE_PROBABILITY)
}

/// As [`generate`], with the extra-edge probability of `RandomConnected`
/// given explicitly.
pub fn generate_with_probability(
    topology: Topology,
    n: usize,
    seed: u64,
    edge_probability: f64,
) -> Result<NetworkGraph, GraphError> {
    if n == 0 {
        return Err(GraphError::BadParam("graph needs at least one vertex".into()));
    }
    let edges: Vec<(usize, usize)> = match topology {
        Topology::Path => (1..n).map(|i| (i - 1, i)).collect(),
        // Cycles on fewer than three vertices degenerate to paths.
        Topology::Cycle if n < 3 => (1..n).map(|i| (i - 1, i)).collect(),
        Topology::Cycle => (1..n).map(|i| (i - 1, i)).chain([(0, n - 1)]).collect(),
        Topology::Complete => (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect(),
        Topology::Star => (1..n).map(|i| (0, i)).collect(),
        Topology::RandomConnected => {
            if n < 2 {
                return Err(GraphError::BadParam(
                    "random_connected needs at least two vertices".into(),
                ));
            }
            if !(0.0..=1.0).contains(&edge_probability) {
                return Err(GraphError::BadParam(format!(
                    "edge probability {edge_probability} outside [0, 1]"
                )));
            }
            random_connected_edges(n, seed, edge_probability)
        }
    };
    NetworkGraph::new(n, &edges)
}

/// Uniform spanning tree from a random Prüfer sequence, plus every other
/// vertex pair independently with probability `p`. Edges come out sorted.
fn random_connected_edges(n: usize, seed: u64, p: f64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sequence: Vec<usize> = (0..n.saturating_sub(2))
        .map(|_| rng.random_range(0..n))
        .collect();
    let mut tree = prufer_decode(n, &sequence);
    tree.sort_unstable();
    let in_tree: BTreeSet<_> = tree.iter().copied().collect();
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            // Tree edges consume no random draw.
            if in_tree.contains(&(i, j)) || rng.random_bool(p) {
                edges.insert((i, j));
            }
        }
    }
    edges.into_iter().collect()
}

fn prufer_decode(n: usize, sequence: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &v in sequence {
        degree[v] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in sequence {
        let leaf = leaves.pop_first().expect("a Prüfer sequence always leaves a leaf");
        edges.push((leaf.min(v), leaf.max(v)));
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.insert(v);
        }
    }
    let last: Vec<usize> = leaves.into_iter().collect();
    edges.push((last[0], last[1]));
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn g(n: usize, e: &[(usize, usize)]) -> NetworkGraph {
        NetworkGraph::new(n, e).unwrap()
    }

    #[test]
    fn laplacian_examples() {
        let l: DenseMatrix<f64> = laplacian(&generate(Topology::Path, 3, 0).unwrap());
        let want =
            DenseMatrix::from_rows(&[[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]]).unwrap();
        assert_eq!(l, want);
        let k2: DenseMatrix<f64> = laplacian(&generate(Topology::Complete, 2, 0).unwrap());
        assert_eq!(k2, DenseMatrix::from_rows(&[[1.0, -1.0], [-1.0, 1.0]]).unwrap());
        let single: DenseMatrix<f64> = laplacian(&g(1, &[]));
        assert_eq!(single, DenseMatrix::zeros(1, 1));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(NetworkGraph::new(2, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            NetworkGraph::new(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(1, 0))
        );
        assert!(matches!(
            NetworkGraph::new(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange(..))
        ));
    }

    #[test]
    fn connectivity_examples() {
        assert!(is_connected(&generate(Topology::Path, 4, 0).unwrap()));
        assert!(!is_connected(&g(4, &[(0, 1), (2, 3)])));
        assert!(is_connected(&g(1, &[])));
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(diameter(&generate(Topology::Path, 4, 0).unwrap()).unwrap(), 3);
        assert_eq!(diameter(&generate(Topology::Complete, 5, 0).unwrap()).unwrap(), 1);
        assert_eq!(diameter(&generate(Topology::Cycle, 6, 0).unwrap()).unwrap(), 3);
        assert_eq!(diameter(&g(4, &[(0, 1), (2, 3)])), Err(GraphError::Disconnected));
    }

    #[test]
    fn lambda2_examples() {
        assert_abs_diff_eq!(lambda2::<f64>(&generate(Topology::Complete, 2, 0).unwrap()).unwrap(), 2.0, epsilon = 1e-12);
        // Spectrum of L(Kₙ) is {0, n, …, n}.
        assert_abs_diff_eq!(lambda2::<f64>(&generate(Topology::Complete, 3, 0).unwrap()).unwrap(), 3.0, epsilon = 1e-12);
        // det(L(P₃) − λI) = −λ(λ − 1)(λ − 3).
        assert_abs_diff_eq!(lambda2::<f64>(&generate(Topology::Path, 3, 0).unwrap()).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(lambda2::<f64>(&g(3, &[(0, 1)])), Err(GraphError::Disconnected));
    }

    #[test]
    fn report_examples() {
        let r = graph_report::<f64>(&generate(Topology::Cycle, 4, 0).unwrap()).unwrap();
        assert!(r.connected);
        assert_eq!(r.diameter, Some(2));
        assert_abs_diff_eq!(r.lambda2.unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.lower_bound.unwrap(), 0.5, epsilon = 1e-15);

        let r = graph_report::<f64>(&generate(Topology::Complete, 2, 0).unwrap()).unwrap();
        assert_abs_diff_eq!(r.lambda2.unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.lower_bound.unwrap(), 2.0, epsilon = 1e-15);

        // Star on 4 vertices: spectrum {0, 1, 1, 4}.
        let r = graph_report::<f64>(&generate(Topology::Star, 4, 0).unwrap()).unwrap();
        assert_eq!(r.diameter, Some(2));
        assert_abs_diff_eq!(r.lambda2.unwrap(), 1.0, epsilon = 1e-12);

        let r = graph_report::<f64>(&g(4, &[(0, 1), (2, 3)])).unwrap();
        assert!(!r.connected);
        assert_eq!(r.lambda2, None);
    }

    #[test]
    fn generate_examples() {
        assert_eq!(generate(Topology::Path, 3, 9).unwrap().edges(), &[(0, 1), (1, 2)]);
        assert_eq!(generate(Topology::Complete, 4, 0).unwrap().edges().len(), 6);
        assert!(is_connected(&generate(Topology::RandomConnected, 8, 42).unwrap()));
        assert!(matches!(generate(Topology::Path, 0, 0), Err(GraphError::BadParam(_))));
        assert!(matches!(
            generate(Topology::RandomConnected, 1, 0),
            Err(GraphError::BadParam(_))
        ));
        assert_eq!(
            generate(Topology::RandomConnected, 20, 7).unwrap(),
            generate(Topology::RandomConnected, 20, 7).unwrap()
        );
    }

    #[test]
    fn prufer_decoding_yields_spanning_trees() {
        assert_eq!(prufer_decode(4, &[3, 3]), vec![(0, 3), (1, 3), (2, 3)]);
        let t = generate_with_probability(Topology::RandomConnected, 9, 5, 0.0).unwrap();
        assert_eq!(t.edges().len(), 8);
        assert!(is_connected(&t));
    }

    proptest! {
        #[test]
        fn laplacian_spectral_properties(
            topology in prop::sample::select(Topology::ALL.to_vec()),
            n in 2usize..=12,
            seed in any::<u64>(),
        ) {
            let graph = generate(topology, n, seed).unwrap();
            let l: DenseMatrix<f64> = laplacian(&graph);
            for i in 0..n {
                prop_assert_eq!(l.row(i).iter().sum::<f64>(), 0.0);
            }
            let e = sym_eigen(&l).unwrap();
            prop_assert!(e.values[0] >= -1e-10);
            prop_assert!(e.values[1] > 1e-9);
            // Kernel direction is the normalized all-ones vector.
            let unit = 1.0 / (n as f64).sqrt();
            let v0 = e.vectors.column(0);
            let sign = v0[0].signum();
            for &c in v0.iter() {
                prop_assert!((sign * c - unit).abs() <= 1e-8);
            }
            let d = diameter(&graph).unwrap() as f64;
            let lambda2 = e.values[1];
            prop_assert!(4.0 / (n as f64 * d) <= lambda2 + 1e-9);
            prop_assert!(lambda2 <= n as f64 + 1e-9);
            let complete = graph.edges().len() == n * (n - 1) / 2;
            prop_assert_eq!((lambda2 - n as f64).abs() <= tolerances::COMPLETE_GRAPH_LAMBDA2, complete);
        }
    }
}
