//! Command-line and config-file options.
//!
//! Every flow option may also come from a TOML file given by `--config`,
//! using the long flag name as key (`max-steps = 5000`). A flag on the
//! command line overrides the file.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use consensus_linsolve::flow::{FlowConfig, Init, Integrator, StepSize, Variant};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(name = "consensus-linsolve", version, about = "Solve Ax = b by projected consensus over a network of agents")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the flow to consensus and report the solution.
    Solve(RunArgs),
    /// Spectral and graph report for a system and graph.
    Analyze(AnalyzeArgs),
    /// Graph utilities.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Follow a sinusoidally drifting right-hand side.
    Track(TrackArgs),
    /// Batch of random instances: spectral checks plus a simulation each.
    Sweep(SweepArgs),
}

#[derive(Debug, Subcommand)]
pub enum GraphCommand {
    /// Write an edge list for a standard topology.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct FlowOptions {
    /// plain | restoring | gains
    #[arg(long)]
    pub variant: Option<String>,
    /// Consensus gain for the gains variant.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Per-agent restoring gains, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub alpha_i: Option<Vec<f64>>,
    /// euler | rk4
    #[arg(long)]
    pub integrator: Option<String>,
    /// Step size, or "auto".
    #[arg(long)]
    pub step: Option<String>,
    /// Convergence tolerance on spread and manifold residual.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// min-norm | tangent-noise | free-random
    #[arg(long)]
    pub init: Option<String>,
    /// Record trace metrics every K steps.
    #[arg(long)]
    pub record_every: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct InputOptions {
    /// Coefficient matrix (Matrix Market, array or coordinate).
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Right-hand side, one number per line.
    #[arg(long)]
    pub rhs: Option<PathBuf>,
    /// Communication graph as an edge list.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Rows per agent, comma separated; one row per agent by default.
    #[arg(long, value_delimiter = ',')]
    pub blocks: Option<Vec<usize>>,
    /// Line-delimited JSON trace output.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// JSON summary output.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct DriftOptions {
    #[arg(long)]
    pub drift_amplitude: Option<f64>,
    /// Angular frequency of the drift.
    #[arg(long)]
    pub drift_omega: Option<f64>,
    /// Hold b fixed from this time on.
    #[arg(long)]
    pub freeze_at: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML file with default values for any option.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub input: InputOptions,
    #[command(flatten)]
    pub flow: FlowOptions,
}

#[derive(Debug, Args)]
pub struct TrackArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub drift: DriftOptions,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Coefficient matrix; without it only the graph report is produced.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_delimiter = ',')]
    pub blocks: Option<Vec<usize>>,
    /// Report path; standard output by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// path | cycle | complete | star | random_connected
    #[arg(long)]
    pub topology: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Extra-edge probability for random_connected.
    #[arg(long)]
    pub edge_prob: Option<f64>,
    /// Edge-list path; standard output by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "path,cycle,star,complete,random_connected")]
    pub topologies: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub seeds: Vec<u64>,
    /// Line-delimited JSON output; standard output by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub flow: FlowOptions,
}

/// Options read from the `--config` file.
#[derive(Debug, Default)]
pub struct ConfigFile {
    pub input: InputOptions,
    pub flow: FlowOptions,
    pub drift: DriftOptions,
}

const CONFIG_KEYS: &[&str] = &[
    "matrix", "rhs", "graph", "blocks", "trace", "summary",
    "variant", "alpha", "alpha-i", "integrator", "step", "tol", "max-steps", "seed", "init", "record-every",
    "drift-amplitude", "drift-omega", "freeze-at",
];

pub fn load_config_file(path: Option<&Path>) -> Result<ConfigFile> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    let table: toml::Table = toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
    if let Some(key) = table.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
        bail!("unknown key {key:?} in config {}", path.display());
    }
    let value = toml::Value::Table(table);
    let section = |what: &str| format!("invalid {what} option in config {}", path.display());
    Ok(ConfigFile {
        input: value.clone().try_into().with_context(|| section("input"))?,
        flow: value.clone().try_into().with_context(|| section("flow"))?,
        drift: value.try_into().with_context(|| section("drift"))?,
    })
}

macro_rules! prefer {
    ($cli:expr, $file:expr; $($field:ident),+ $(,)?) => {
        $( if $cli.$field.is_none() { $cli.$field = $file.$field.take(); } )+
    };
}

impl InputOptions {
    pub fn or(mut self, mut file: InputOptions) -> Self {
        prefer!(self, file; matrix, rhs, graph, blocks, trace, summary);
        self
    }
}

impl FlowOptions {
    pub fn or(mut self, mut file: FlowOptions) -> Self {
        prefer!(self, file; variant, alpha, alpha_i, integrator, step, tol, max_steps, seed, init, record_every);
        self
    }

    pub fn to_config(&self) -> Result<FlowConfig<f64>> {
        let mut config = FlowConfig::default();
        if let Some(v) = &self.variant {
            config.variant = v.parse::<Variant>()?;
        }
        if let Some(v) = &self.integrator {
            config.integrator = v.parse::<Integrator>()?;
        }
        if let Some(v) = &self.init {
            config.init = v.parse::<Init>()?;
        }
        if let Some(v) = &self.step {
            config.step = match v.as_str() {
                "auto" => StepSize::Auto,
                h => StepSize::Fixed(h.parse().with_context(|| format!("step must be a number or \"auto\", got {h:?}"))?),
            };
        }
        if let Some(v) = self.alpha {
            config.alpha = v;
        }
        if let Some(v) = &self.alpha_i {
            config.alpha_i = v.clone();
        }
        if let Some(v) = self.tol {
            config.convergence_tol = v;
        }
        if let Some(v) = self.max_steps {
            config.max_steps = v;
        }
        if let Some(v) = self.seed {
            config.seed = v;
        }
        if let Some(v) = self.record_every {
            config.record_every = v;
        }
        config.validate()?;
        Ok(config)
    }
}

impl DriftOptions {
    pub fn or(mut self, mut file: DriftOptions) -> Self {
        prefer!(self, file; drift_amplitude, drift_omega, freeze_at);
        self
    }
}

pub fn required<'a>(value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    match value {
        Some(p) => Ok(p),
        None => bail!("missing --{flag}"),
    }
}
