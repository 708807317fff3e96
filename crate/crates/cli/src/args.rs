use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::RunConfig;
use crate::error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "hproj",
    version,
    about = "Cyclic projections in CAT(0) model spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate a scenario and write its trace.
    Run(RunArgs),
    /// Run an invariant suite and report worst margins.
    Verify(VerifyArgs),
    /// Fit a power law to the step sequence of a run or a trace file.
    Rate(RateArgs),
    /// Run a scenario over a parameter grid and print a JSON array of summaries.
    Sweep(SweepArgs),
}

/// Settings shared by `run`, `rate` and `sweep`. Unset flags fall back to the
/// config file, then to built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamFlags {
    /// Key=value config file; flags override its settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
    /// Circumference of the twisted chain.
    #[arg(long)]
    pub circumference: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Number of sets in the tripod scenario.
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of cycles.
    #[arg(long)]
    pub n: Option<usize>,
    /// Start label or comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Keep every stride-th point in the stored trace and output.
    #[arg(long)]
    pub stride: Option<usize>,
    /// Segment projector: exact or generic.
    #[arg(long)]
    pub solver: Option<String>,
    /// Iterate the m-th power of the cyclic product.
    #[arg(long)]
    pub power: Option<usize>,
}

impl ParamFlags {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let mut push = |key: &'static str, value: Option<String>| {
            if let Some(v) = value {
                out.push((key, v));
            }
        };
        push("epsilon", self.epsilon.map(|v| v.to_string()));
        push("alpha", self.alpha.map(|v| v.to_string()));
        push("radius", self.radius.map(|v| v.to_string()));
        push("circumference", self.circumference.map(|v| v.to_string()));
        push("theta", self.theta.map(|v| v.to_string()));
        push("k", self.k.map(|v| v.to_string()));
        push("n", self.n.map(|v| v.to_string()));
        push("start", self.start.clone());
        push("tol", self.tol.map(|v| v.to_string()));
        push("stride", self.stride.map(|v| v.to_string()));
        push("solver", self.solver.clone());
        push("power", self.power.map(|v| v.to_string()));
        out
    }

    /// Defaults, then the config file, then `extra` and these flags.
    pub fn resolve(
        &self,
        scenario: Option<&str>,
        extra: &[(&'static str, String)],
    ) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        if let Some(name) = scenario {
            cfg.scenario = Some(name.to_string());
        }
        for (key, value) in extra.iter().cloned().chain(self.pairs()) {
            cfg.set(key, &value)?;
        }
        cfg.params.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// tripod, plane-two-sets, twisted-chain or plane-two-lines.
    pub scenario: Option<String>,
    #[command(flatten)]
    pub params: ParamFlags,
    /// Trace file; `-` writes to stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Fit the rate over cycles lo,hi and report its slope.
    #[arg(long)]
    pub window: Option<String>,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    pub scenario: Option<String>,
    #[command(flatten)]
    pub params: ParamFlags,
    /// Cycles lo,hi to fit over.
    #[arg(long)]
    pub window: Option<String>,
    /// Read n and r from a CSV trace instead of running a scenario.
    #[arg(long, conflicts_with = "scenario")]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub scenario: Option<String>,
    #[command(flatten)]
    pub params: ParamFlags,
    /// Grid axis as key=v1,v2,...; repeat for a cartesian product.
    #[arg(long)]
    pub grid: Vec<String>,
    /// JSON output file; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Fit the rate over cycles lo,hi in every run.
    #[arg(long)]
    pub window: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Metric,
    Projections,
    TwoSet,
    Counterexamples,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Base seed for random samples.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random samples per check.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Cycles for the two-set run.
    #[arg(long, default_value_t = 10_000)]
    pub cycles: usize,
}
