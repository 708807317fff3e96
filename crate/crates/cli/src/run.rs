use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use hadamard_proj::engine::{
    iterate_with, rate_fit, verdict, EngineError, IterateOptions, StepView, DEFAULT_R_TOL,
    DEFAULT_TAIL_FRACTION,
};
use hadamard_proj::metric::Coordinates;
use hadamard_proj::scenarios::{Expected, Scenario};
use hadamard_proj::{Classification, ProjectionSpace};
use serde::Serialize;

use crate::config::{Format, Params, RunConfig};
use crate::error::{CliError, Result};
use crate::scenario::{build, resolve_start, with_scenario};

#[derive(Debug, Clone, Serialize)]
pub struct Sums {
    pub r_sq: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub params: Params,
    /// Completed cycles.
    pub n: usize,
    pub verdict: Classification,
    pub final_r: f64,
    pub liminf_r: f64,
    pub slope: Option<f64>,
    pub sums: Sums,
    pub expected: Expected,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aborted: Option<String>,
}

impl Summary {
    /// One-line human summary, e.g. `verdict=NotRegular, r=1.0`.
    pub fn line(&self) -> String {
        let mut s = format!(
            "verdict={:?}, r={}, liminf_r={}, cycles={}",
            self.verdict,
            short(self.final_r),
            short(self.liminf_r),
            self.n
        );
        if let Some(slope) = self.slope {
            s.push_str(&format!(", slope={}", short(slope)));
        }
        if let Some(reason) = &self.aborted {
            s.push_str(&format!(", aborted=\"{reason}\""));
        }
        s
    }
}

/// Rounds to 11 significant digits for display, so `0.9999999999999999`
/// prints as `1.0`.
pub fn short(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let rounded: f64 = format!("{v:.10e}").parse().unwrap_or(v);
    format!("{rounded:?}")
}

/// Full-precision float for data files.
pub fn exact(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub n: usize,
    pub r: f64,
    pub s: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub point: Vec<f64>,
}

pub enum Sink {
    Discard,
    Csv(Box<csv::Writer<Box<dyn Write>>>),
    Json(Vec<Row>),
}

impl Sink {
    fn push(&mut self, row: Row) -> Result<()> {
        match self {
            Sink::Discard => {}
            Sink::Json(rows) => rows.push(row),
            Sink::Csv(w) => {
                let opt = |v: Option<f64>| v.map(exact).unwrap_or_default();
                let mut record = vec![
                    row.n.to_string(),
                    exact(row.r),
                    opt(row.s),
                    opt(row.a),
                    opt(row.b),
                ];
                record.extend(row.point.iter().copied().map(exact));
                w.write_record(&record)?;
            }
        }
        Ok(())
    }
}

fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

/// Iterates the configured scenario, streaming rows into `sink`.
///
/// A projection failure mid-run still returns a summary, flagged incomplete.
pub fn execute<S>(sc: &Scenario<S>, cfg: &RunConfig, sink: &mut Sink) -> Result<Summary>
where
    S: ProjectionSpace,
    S::Point: Coordinates,
{
    let p = &cfg.params;
    let start = resolve_start(sc, p.start.as_deref())?;
    let sets = sc.power_sets(p.power);
    let opts = IterateOptions {
        projection: p.projection_options(),
        stride: p.stride,
    };
    let row_stride = p.stride.unwrap_or(1);
    let mut sink_error = None;
    let trace = iterate_with(
        &sc.space,
        &sets,
        &start,
        p.n,
        &opts,
        |v: &StepView<'_, S::Point>| {
            if sink_error.is_some() || v.n % row_stride != 0 {
                return;
            }
            let row = Row {
                n: v.n,
                r: v.r,
                s: v.s,
                a: v.a,
                b: v.b,
                point: v.point.to_columns(),
            };
            if let Err(e) = sink.push(row) {
                sink_error = Some(e);
            }
        },
    )
    .map_err(|e| match e {
        EngineError::Projection(e) => CliError::Numerical(e.to_string()),
        other => CliError::usage(other.to_string()),
    })?;
    if let Some(e) = sink_error {
        return Err(e);
    }
    let v = verdict(&trace, DEFAULT_R_TOL, DEFAULT_TAIL_FRACTION);
    let slope = match cfg.window {
        Some((lo, hi)) if trace.is_complete() => {
            if hi >= trace.cycles() {
                return Err(CliError::usage(format!(
                    "window end {hi} must be below the cycle count {}",
                    trace.cycles()
                )));
            }
            Some(
                rate_fit(&trace, (lo, hi))
                    .map_err(|e| CliError::usage(e.to_string()))?
                    .slope,
            )
        }
        _ => v.rate_slope,
    };
    let expected = match &p.start {
        Some(label) => sc.start(label).map(|s| s.expected.clone()),
        None => Some(sc.default_start().expected.clone()),
    }
    .unwrap_or_else(|| sc.expected.clone());
    Ok(Summary {
        scenario: sc.name.clone(),
        params: p.clone(),
        n: trace.cycles(),
        verdict: v.classification,
        final_r: v.final_r,
        liminf_r: v.liminf_r,
        slope,
        sums: Sums {
            r_sq: trace.steps.iter().map(|r| r * r).sum(),
        },
        expected,
        complete: trace.is_complete(),
        aborted: trace.aborted.clone(),
    })
}

/// Builds the scenario named in `cfg` and runs it with no trace output.
pub fn summarize(cfg: &RunConfig) -> Result<Summary> {
    let name = cfg
        .scenario
        .as_deref()
        .ok_or_else(|| CliError::usage("no scenario given"))?;
    let built = build(name, &cfg.params)?;
    with_scenario!(&built, sc => execute(sc, cfg, &mut Sink::Discard))
}

#[derive(Serialize)]
struct JsonTrace<'a> {
    #[serde(flatten)]
    summary: &'a Summary,
    columns: Vec<&'static str>,
    trace: &'a [Row],
}

/// `run`: writes the trace file and prints the summary line.
pub fn cmd_run(cfg: &RunConfig) -> Result<()> {
    let name = cfg
        .scenario
        .as_deref()
        .ok_or_else(|| CliError::usage("no scenario given"))?;
    let built = build(name, &cfg.params)?;
    let path = cfg.output_path(name);
    let to_stdout = path.is_none();
    let summary = with_scenario!(&built, sc => run_to_file(sc, cfg, path.as_deref()))?;
    let line = summary.line();
    if to_stdout {
        eprintln!("{line}");
    } else {
        println!("{line}");
    }
    match &summary.aborted {
        Some(reason) => Err(CliError::Numerical(format!(
            "{reason} (partial output: {} of {} cycles)",
            summary.n, cfg.params.n
        ))),
        None => Ok(()),
    }
}

fn run_to_file<S>(sc: &Scenario<S>, cfg: &RunConfig, path: Option<&Path>) -> Result<Summary>
where
    S: ProjectionSpace,
    S::Point: Coordinates,
{
    // resolve the start before creating the file so usage errors leave nothing behind
    resolve_start(sc, cfg.params.start.as_deref())?;
    let columns: Vec<&'static str> = ["n", "r", "s", "a", "b"]
        .into_iter()
        .chain(S::Point::column_names())
        .collect();
    match cfg.format {
        Format::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(open(path)?);
            writer.write_record(&columns)?;
            let mut sink = Sink::Csv(Box::new(writer));
            let summary = execute(sc, cfg, &mut sink)?;
            if let Sink::Csv(mut w) = sink {
                w.flush()?;
            }
            Ok(summary)
        }
        Format::Json => {
            let mut sink = Sink::Json(Vec::new());
            let summary = execute(sc, cfg, &mut sink)?;
            let Sink::Json(rows) = sink else {
                unreachable!()
            };
            let mut out = open(path)?;
            serde_json::to_writer_pretty(
                &mut out,
                &JsonTrace {
                    summary: &summary,
                    columns,
                    trace: &rows,
                },
            )?;
            writeln!(out)?;
            out.flush()?;
            Ok(summary)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_rounds_display_noise() {
        assert_eq!(short(0.9999999999999999), "1.0");
        assert_eq!(short(1.0), "1.0");
        assert_eq!(short(0.25), "0.25");
        assert_eq!(short(f64::NAN), "NaN");
    }

    #[test]
    fn tripod_summary_matches_the_counterexample() {
        let mut cfg = RunConfig::default();
        cfg.set("scenario", "tripod").unwrap();
        cfg.set("n", "100").unwrap();
        cfg.set("start", "endpoint").unwrap();
        let s = summarize(&cfg).unwrap();
        assert!(
            s.line().starts_with("verdict=NotRegular, r=1.0"),
            "{}",
            s.line()
        );
        assert!(s.complete);
    }
}
