use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::RunConfig;
use crate::error::{CliError, Result, EXIT_NUMERICAL, EXIT_USAGE};
use crate::run::{summarize, Summary};

/// One grid axis: a setting key and its values.
pub type Axis = (String, Vec<String>);

pub fn parse_axis(spec: &str) -> Result<Axis> {
    let (key, values) = spec
        .split_once('=')
        .ok_or_else(|| CliError::usage(format!("grid {spec:?} must look like key=v1,v2")))?;
    let values = values
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(String::from)
        .collect();
    Ok((key.trim().to_string(), values))
}

/// Grid points in row-major order: the first axis varies slowest.
/// No axes, or an axis without values, gives no points.
pub fn grid_points(axes: &[Axis]) -> Vec<Vec<(String, String)>> {
    if axes.is_empty() || axes.iter().any(|(_, v)| v.is_empty()) {
        return Vec::new();
    }
    let mut points: Vec<Vec<(String, String)>> = vec![Vec::new()];
    for (key, values) in axes {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push((key.clone(), v.clone()));
                    p
                })
            })
            .collect();
    }
    points
}

#[derive(Debug, Serialize)]
pub struct Entry {
    pub index: usize,
    pub grid: Map<String, Value>,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub code: u8,
}

fn run_point(index: usize, template: &RunConfig, point: &[(String, String)]) -> Entry {
    let grid = point
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let outcome = (|| {
        let mut cfg = template.clone();
        for (key, value) in point {
            cfg.set(key, value)?;
        }
        cfg.params.validate()?;
        summarize(&cfg)
    })();
    match outcome {
        Ok(summary) => {
            let failure = summary.aborted.clone();
            Entry {
                index,
                grid,
                ok: failure.is_none(),
                code: if failure.is_some() { EXIT_NUMERICAL } else { 0 },
                summary: Some(summary),
                error: failure,
            }
        }
        Err(e) => Entry {
            index,
            grid,
            ok: false,
            code: e.code(),
            summary: None,
            error: Some(e.to_string()),
        },
    }
}

/// Runs every grid point in parallel; entries come back in grid order.
pub fn sweep(template: &RunConfig, axes: &[Axis]) -> Vec<Entry> {
    grid_points(axes)
        .par_iter()
        .enumerate()
        .map(|(i, point)| run_point(i, template, point))
        .collect()
}

/// Exit code of a finished sweep: numerical failures win over usage errors.
pub fn sweep_code(entries: &[Entry]) -> u8 {
    if entries.iter().any(|e| e.code == EXIT_NUMERICAL) {
        EXIT_NUMERICAL
    } else if entries.iter().any(|e| e.code == EXIT_USAGE) {
        EXIT_USAGE
    } else {
        entries.iter().map(|e| e.code).max().unwrap_or(0)
    }
}

pub fn write_entries(entries: &[Entry], out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, entries)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_row_major() {
        let axes = vec![parse_axis("a=1,2").unwrap(), parse_axis("b=x,y,z").unwrap()];
        let points = grid_points(&axes);
        assert_eq!(points.len(), 6);
        assert_eq!(
            points[1],
            vec![("a".into(), "1".into()), ("b".into(), "y".into())]
        );
        assert_eq!(points[3][0].1, "2");
    }

    #[test]
    fn empty_grids_have_no_points() {
        assert!(grid_points(&[]).is_empty());
        assert!(grid_points(&[parse_axis("a=").unwrap()]).is_empty());
        assert!(parse_axis("novalue").is_err());
    }

    #[test]
    fn failures_are_recorded_and_the_sweep_continues() {
        let mut template = RunConfig::default();
        template.set("scenario", "plane-two-lines").unwrap();
        template.set("n", "50").unwrap();
        let entries = sweep(&template, &[parse_axis("theta=0.5,-1,1").unwrap()]);
        assert_eq!(entries.len(), 3);
        assert!(entries[0].ok && entries[2].ok);
        assert!(!entries[1].ok);
        assert_eq!(sweep_code(&entries), EXIT_USAGE);
    }
}
