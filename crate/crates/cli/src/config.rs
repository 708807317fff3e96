//! Run configuration: defaults, then the key=value config file, then flags.

use std::f64::consts::FRAC_PI_4;
use std::fs;
use std::path::{Path, PathBuf};

use hadamard_proj::convex::{ProjectionOptions, SegmentSolver};
use serde::Serialize;

use crate::error::{CliError, Result};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "HPROJ_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Exact,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Scenario parameters and iteration settings; serialized into summaries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Params {
    pub epsilon: f64,
    pub alpha: f64,
    pub radius: f64,
    pub circumference: f64,
    pub theta: f64,
    pub k: usize,
    pub n: usize,
    pub start: Option<String>,
    pub tol: f64,
    pub stride: Option<usize>,
    pub solver: Solver,
    pub power: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            epsilon: 0.5,
            alpha: 1.0,
            radius: 0.1,
            circumference: 3.0,
            theta: FRAC_PI_4,
            k: 3,
            n: 1000,
            start: None,
            tol: 1e-12,
            stride: None,
            solver: Solver::Exact,
            power: 1,
        }
    }
}

impl Params {
    pub fn projection_options(&self) -> ProjectionOptions {
        match self.solver {
            Solver::Exact => ProjectionOptions {
                tol: self.tol,
                segment_solver: SegmentSolver::Exact,
            },
            Solver::Generic => ProjectionOptions::generic(self.tol),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(CliError::usage("n must be at least 1"));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::usage("tol must be positive and finite"));
        }
        if self.stride == Some(0) {
            return Err(CliError::usage("stride must be at least 1"));
        }
        if self.power == 0 {
            return Err(CliError::usage("power must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Option<String>,
    pub params: Params,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub window: Option<(usize, usize)>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: None,
            params: Params::default(),
            output: None,
            format: Format::Csv,
            window: None,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("invalid value {value:?} for {key}")))
}

/// Parses `lo,hi` or `lo..hi`.
pub fn parse_window(value: &str) -> Result<(usize, usize)> {
    let (lo, hi) = value
        .split_once(',')
        .or_else(|| value.split_once(".."))
        .ok_or_else(|| CliError::usage(format!("window {value:?} must look like lo,hi")))?;
    let lo = parse::<usize>("window", lo)?;
    let hi = parse::<usize>("window", hi)?;
    if lo == 0 || lo >= hi {
        return Err(CliError::usage(format!(
            "window needs 1 <= lo < hi, got {lo},{hi}"
        )));
    }
    Ok((lo, hi))
}

impl RunConfig {
    /// Applies one `key=value` setting. Keys accept `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let p = &mut self.params;
        match key.as_str() {
            "scenario" => self.scenario = Some(value.trim().to_string()),
            "epsilon" => p.epsilon = parse(&key, value)?,
            "alpha" => p.alpha = parse(&key, value)?,
            "radius" => p.radius = parse(&key, value)?,
            "circumference" => p.circumference = parse(&key, value)?,
            "theta" => p.theta = parse(&key, value)?,
            "k" => p.k = parse(&key, value)?,
            "n" => p.n = parse(&key, value)?,
            "start" => p.start = Some(value.trim().to_string()),
            "tol" => p.tol = parse(&key, value)?,
            "stride" => p.stride = Some(parse(&key, value)?),
            "power" => p.power = parse(&key, value)?,
            "solver" => {
                p.solver = match value.trim() {
                    "exact" => Solver::Exact,
                    "generic" => Solver::Generic,
                    other => return Err(CliError::usage(format!("unknown solver {other:?}"))),
                }
            }
            "format" => {
                self.format = match value.trim() {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    other => return Err(CliError::usage(format!("unknown format {other:?}"))),
                }
            }
            "output" => self.output = Some(PathBuf::from(value.trim())),
            "window" => self.window = Some(parse_window(value)?),
            other => return Err(CliError::usage(format!("unknown setting {other:?}"))),
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        for (key, value) in parse_config(&text)? {
            self.set(&key, &value)?;
        }
        Ok(())
    }

    /// Where a run writes its trace: `--output`, else the environment
    /// directory, else the working directory. `-` means stdout.
    pub fn output_path(&self, scenario: &str) -> Option<PathBuf> {
        match &self.output {
            Some(p) if p.as_os_str() == "-" => None,
            Some(p) => Some(p.clone()),
            None => {
                let dir = std::env::var_os(OUTPUT_DIR_ENV)
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from("."));
                Some(dir.join(format!("{scenario}.{}", self.format.extension())))
            }
        }
    }
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("config line {}: expected key=value", i + 1)))?;
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}
