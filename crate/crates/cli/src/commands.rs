use std::io::Write;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use consensus_linsolve::flow::{FlowError, LinearSystem};
use consensus_linsolve::graph::{generate_with_probability, graph_report, Topology, DEFAULT_EDGE_PROBABILITY};
use consensus_linsolve::harness::{run, sweep, track_varying_b, Drift, HarnessError, SimulationTrace, SweepEntry};
use consensus_linsolve::io::{
    format_edge_list, format_real, parse_edge_list, parse_matrix_market, parse_vector, to_json, to_json_lines,
};
use consensus_linsolve::spectral::spectral_report;
use consensus_linsolve::{GraphReport, NetworkGraph, SpectralReport};
use serde::Serialize;

use crate::args::{load_config_file, required, AnalyzeArgs, GenArgs, InputOptions, RunArgs, SweepArgs, TrackArgs};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Done,
    NotConverged,
}

fn read(path: &Path, what: &str) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {what} {}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("cannot write to standard output"),
    }
}

fn load_graph(path: &Path) -> Result<NetworkGraph> {
    parse_edge_list(&read(path, "graph")?).with_context(|| format!("bad edge list {}", path.display()))
}

fn build_system(a: consensus_linsolve::Matrix, b: &[f64], blocks: Option<&[usize]>) -> Result<LinearSystem<f64>> {
    ensure!(
        b.len() == a.rows(),
        "right-hand side has {} entries but the matrix has {} rows",
        b.len(),
        a.rows()
    );
    Ok(match blocks {
        Some(sizes) => LinearSystem::from_blocks(&a, b, sizes)?,
        None => LinearSystem::from_rows(&a, b)?,
    })
}

/// Inputs parsed and validated before any computation.
struct Problem {
    system: LinearSystem<f64>,
    graph: NetworkGraph,
}

impl Problem {
    fn load(input: &InputOptions) -> Result<Self> {
        let matrix_path = required(&input.matrix, "matrix")?;
        let rhs_path = required(&input.rhs, "rhs")?;
        let graph_path = required(&input.graph, "graph")?;
        let a = parse_matrix_market(&read(matrix_path, "matrix")?)
            .with_context(|| format!("bad matrix {}", matrix_path.display()))?;
        let b: Vec<f64> =
            parse_vector(&read(rhs_path, "rhs")?).with_context(|| format!("bad rhs {}", rhs_path.display()))?;
        let graph = load_graph(graph_path)?;
        let system = build_system(a, &b, input.blocks.as_deref())?;
        Ok(Self { system, graph })
    }
}

/// Divergence counts as non-convergence; every other harness error is a
/// setup error.
fn simulation(result: Result<SimulationTrace<f64>, HarnessError>) -> Result<Option<SimulationTrace<f64>>> {
    match result {
        Ok(trace) => Ok(Some(trace)),
        Err(HarnessError::Flow(e @ FlowError::NonFinite { .. })) => {
            eprintln!("error: {e}");
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn report_trace(trace: &SimulationTrace<f64>, input: &InputOptions) -> Result<()> {
    for w in &trace.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(path) = &input.trace {
        write_output(Some(path), &to_json_lines(&trace.records))?;
    }
    if let Some(path) = &input.summary {
        write_output(Some(path), &to_json(&trace.summary()))?;
    }
    let solution: String = trace.consensus().iter().map(|&v| format_real(v) + "\n").collect();
    write_output(None, &solution)
}

pub fn solve(args: RunArgs) -> Result<Status> {
    let file = load_config_file(args.config.as_deref())?;
    let input = args.input.or(file.input);
    let config = args.flow.or(file.flow).to_config()?;
    let problem = Problem::load(&input)?;
    let Some(trace) = simulation(run(&problem.system, &problem.graph, &config))? else {
        return Ok(Status::NotConverged);
    };
    report_trace(&trace, &input)?;
    if trace.converged {
        Ok(Status::Done)
    } else {
        eprintln!("error: not converged after {} steps", trace.steps);
        Ok(Status::NotConverged)
    }
}

pub fn track(args: TrackArgs) -> Result<Status> {
    let file = load_config_file(args.run.config.as_deref())?;
    let input = args.run.input.or(file.input);
    let config = args.run.flow.or(file.flow).to_config()?;
    let drift_options = args.drift.or(file.drift);
    let mut drift = Drift::new(
        drift_options.drift_amplitude.unwrap_or(0.0),
        drift_options.drift_omega.unwrap_or(1.0),
    );
    if let Some(t) = drift_options.freeze_at {
        drift = drift.frozen_at(t);
    }
    let problem = Problem::load(&input)?;
    let Some(trace) = simulation(track_varying_b(&problem.system, &problem.graph, &config, drift))? else {
        return Ok(Status::NotConverged);
    };
    report_trace(&trace, &input)?;
    // Without a freeze time a drifting run cannot converge by design.
    let expects_convergence = drift.amplitude == 0.0 || drift.freeze_at.is_some();
    if expects_convergence && !trace.converged {
        eprintln!("error: not converged after {} steps", trace.steps);
        return Ok(Status::NotConverged);
    }
    Ok(Status::Done)
}

#[derive(Serialize)]
struct AnalyzeReport {
    graph: GraphReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectral: Option<SpectralReport>,
}

pub fn analyze(args: AnalyzeArgs) -> Result<Status> {
    let graph = load_graph(&args.graph)?;
    let matrix = match &args.matrix {
        Some(path) => {
            Some(parse_matrix_market(&read(path, "matrix")?).with_context(|| format!("bad matrix {}", path.display()))?)
        }
        None => None,
    };
    let report = graph_report::<f64>(&graph)?;
    ensure!(report.connected, "communication graph is disconnected");
    let spectral = match matrix {
        Some(a) => {
            let zeros = vec![0.0; a.rows()];
            let system = build_system(a, &zeros, args.blocks.as_deref())?;
            Some(spectral_report(&system, &graph)?)
        }
        None => None,
    };
    let out = AnalyzeReport { graph: report, spectral };
    write_output(args.out.as_deref(), &to_json(&out))?;
    Ok(Status::Done)
}

pub fn graph_gen(args: GenArgs) -> Result<Status> {
    let topology: Topology = args.topology.parse()?;
    let p = args.edge_prob.unwrap_or(DEFAULT_EDGE_PROBABILITY);
    let graph = generate_with_probability(topology, args.n, args.seed, p)?;
    write_output(args.out.as_deref(), &format_edge_list(&graph))?;
    Ok(Status::Done)
}

#[derive(Serialize)]
struct FailedEntry<'a> {
    entry: &'a SweepEntry,
    error: String,
}

pub fn sweep_cmd(args: SweepArgs) -> Result<Status> {
    let config = args.flow.to_config()?;
    let topologies = args
        .topologies
        .iter()
        .map(|t| t.parse::<Topology>())
        .collect::<Result<Vec<_>, _>>()?;
    if topologies.is_empty() || args.sizes.is_empty() || args.seeds.is_empty() {
        bail!("sweep needs at least one topology, size and seed");
    }
    let mut entries = Vec::new();
    for &topology in &topologies {
        for &n in &args.sizes {
            for &seed in &args.seeds {
                entries.push(SweepEntry {
                    topology,
                    n,
                    seed,
                    variant: config.variant,
                });
            }
        }
    }
    let mut text = String::new();
    for (entry, row) in entries.iter().zip(sweep(&entries, &config)) {
        match row {
            Ok(row) => text += &to_json(&row),
            Err(e) => {
                eprintln!("warning: {} n={} seed={}: {e}", entry.topology, entry.n, entry.seed);
                text += &to_json(&FailedEntry { entry, error: e.to_string() });
            }
        }
    }
    write_output(args.out.as_deref(), &text)?;
    Ok(Status::Done)
}
