use std::path::Path;

use hadamard_proj::engine::{fit_power_law, iterate, IterateOptions, RateFit};
use hadamard_proj::ProjectionSpace;

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::run::short;
use crate::scenario::{build, resolve_start, with_scenario};

/// Step sequence as `(n, r_n)` pairs, sorted by `n`.
pub type Steps = Vec<(usize, f64)>;

pub struct RateReport {
    pub fit: RateFit,
    pub window: (usize, usize),
    /// `sqrt(n) r_n` at the first and last fitted cycle.
    pub scaled_ends: (f64, f64),
}

impl RateReport {
    pub fn line(&self) -> String {
        let (lo, hi) = self.window;
        let (a, b) = self.scaled_ends;
        format!(
            "slope={}, intercept={}, used={}, window={lo}..{hi}, sqrt(n)*r_n: {}@{lo} {}@{hi} ratio={}",
            short(self.fit.slope),
            short(self.fit.intercept),
            self.fit.used,
            short(a),
            short(b),
            short(b / a)
        )
    }
}

pub fn fit_window(steps: &[(usize, f64)], window: Option<(usize, usize)>) -> Result<RateReport> {
    let first = steps.iter().map(|s| s.0).find(|&n| n >= 1);
    let last = steps.last().map(|s| s.0);
    let (lo, hi) = match (window, first, last) {
        (Some(w), _, _) => w,
        (None, Some(f), Some(l)) if f < l => (f.max(l / 100), l),
        _ => {
            return Err(CliError::usage(
                "need at least two cycles with n >= 1 to fit a rate",
            ))
        }
    };
    let inside: Steps = steps
        .iter()
        .copied()
        .filter(|(n, _)| (lo..=hi).contains(n))
        .collect();
    let (Some(&(n_lo, r_lo)), Some(&(n_hi, r_hi))) = (inside.first(), inside.last()) else {
        return Err(CliError::usage(format!(
            "no steps inside window {lo}..{hi}"
        )));
    };
    let fit = fit_power_law(inside.iter().copied()).map_err(|e| CliError::usage(e.to_string()))?;
    Ok(RateReport {
        fit,
        window: (n_lo, n_hi),
        scaled_ends: ((n_lo as f64).sqrt() * r_lo, (n_hi as f64).sqrt() * r_hi),
    })
}

/// Reads the `n` and `r` columns of a trace CSV.
pub fn read_trace(path: &Path) -> Result<Steps> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::usage(format!("{}: no {name:?} column", path.display())))
    };
    let (n_col, r_col) = (column("n")?, column("r")?);
    let mut steps = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("").trim().to_string();
        let bad = |what: &str| {
            CliError::usage(format!("{}: row {}: bad {what}", path.display(), line + 1))
        };
        let n: usize = field(n_col).parse().map_err(|_| bad("n"))?;
        let r: f64 = field(r_col).parse().map_err(|_| bad("r"))?;
        steps.push((n, r));
    }
    steps.sort_by_key(|s| s.0);
    Ok(steps)
}

fn run_steps<S: ProjectionSpace>(
    sc: &hadamard_proj::scenarios::Scenario<S>,
    cfg: &RunConfig,
) -> Result<Steps>
where
    S::Point: hadamard_proj::metric::Coordinates,
{
    let p = &cfg.params;
    let start = resolve_start(sc, p.start.as_deref())?;
    let opts = IterateOptions {
        projection: p.projection_options(),
        stride: p.stride,
    };
    let trace = iterate(&sc.space, &sc.power_sets(p.power), &start, p.n, &opts)
        .map_err(|e| CliError::usage(e.to_string()))?;
    if let Some(reason) = trace.aborted {
        return Err(CliError::Numerical(reason));
    }
    Ok(trace.steps.into_iter().enumerate().collect())
}

pub fn cmd_rate(cfg: &RunConfig, trace: Option<&Path>) -> Result<()> {
    let steps = match trace {
        Some(path) => read_trace(path)?,
        None => {
            let name = cfg
                .scenario
                .as_deref()
                .ok_or_else(|| CliError::usage("give a scenario or --trace"))?;
            let built = build(name, &cfg.params)?;
            with_scenario!(&built, sc => run_steps(sc, cfg))?
        }
    };
    let report = fit_window(&steps, cfg.window)?;
    println!("{}", report.line());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_power_law_fits_exactly() {
        let steps: Steps = (1..=1000)
            .map(|n| (n, 3.0 * (n as f64).powf(-0.75)))
            .collect();
        let r = fit_window(&steps, Some((10, 1000))).unwrap();
        assert!((r.fit.slope + 0.75).abs() < 1e-12);
        assert_eq!(r.window, (10, 1000));
        let expected = 3.0 * 10f64.powf(-0.25);
        assert!((r.scaled_ends.0 - expected).abs() < 1e-12);
    }

    #[test]
    fn default_window_spans_the_last_two_decades() {
        let steps: Steps = (0..=1000).map(|n| (n, 1.0)).collect();
        let r = fit_window(&steps, None).unwrap();
        assert_eq!(r.window, (10, 1000));
        assert!(r.fit.slope.abs() < 1e-12);
    }

    #[test]
    fn empty_window_is_a_usage_error() {
        let steps: Steps = vec![(1, 1.0), (2, 0.5)];
        assert!(matches!(
            fit_window(&steps, Some((5, 9))),
            Err(CliError::Usage(_))
        ));
    }
}
