use hadamard_proj::metric::{Coordinates, Plane, TripodProduct, TwistedChain};
use hadamard_proj::scenarios::{
    build_plane_two_lines, build_plane_two_sets, build_tripod_counterexample, build_twisted_chain,
    Scenario, Start,
};
use hadamard_proj::MetricSpace;

use crate::config::Params;
use crate::error::{CliError, Result};

pub const SCENARIO_NAMES: [&str; 4] = [
    "tripod",
    "plane-two-sets",
    "twisted-chain",
    "plane-two-lines",
];

pub enum Built {
    Tripod(Scenario<TripodProduct>),
    Plane(Scenario<Plane>),
    Chain(Scenario<TwistedChain>),
}

/// Evaluates `$body` with `$sc` bound to the concrete scenario.
macro_rules! with_scenario {
    ($built:expr, $sc:ident => $body:expr) => {
        match $built {
            $crate::scenario::Built::Tripod($sc) => $body,
            $crate::scenario::Built::Plane($sc) => $body,
            $crate::scenario::Built::Chain($sc) => $body,
        }
    };
}
pub(crate) use with_scenario;

pub fn build(name: &str, p: &Params) -> Result<Built> {
    let invalid =
        |e: hadamard_proj::scenarios::ScenarioError| CliError::usage(format!("{name}: {e}"));
    Ok(match name {
        "tripod" => Built::Tripod(build_tripod_counterexample(p.k).map_err(invalid)?),
        "plane-two-sets" => Built::Plane(build_plane_two_sets(p.epsilon).map_err(invalid)?),
        "twisted-chain" => {
            Built::Chain(build_twisted_chain(p.alpha, p.radius, p.circumference).map_err(invalid)?)
        }
        "plane-two-lines" => Built::Plane(build_plane_two_lines(p.theta).map_err(invalid)?),
        other => {
            return Err(CliError::usage(format!(
                "unknown scenario {other:?}; expected one of {}",
                SCENARIO_NAMES.join(", ")
            )))
        }
    })
}

/// A start label of the scenario, or comma-separated coordinates.
pub fn resolve_start<S>(sc: &Scenario<S>, spec: Option<&str>) -> Result<S::Point>
where
    S: MetricSpace,
    S::Point: Coordinates,
{
    let Some(spec) = spec else {
        return Ok(sc.default_start().point.clone());
    };
    if let Some(Start { point, .. }) = sc.start(spec) {
        return Ok(point.clone());
    }
    let labels: Vec<&str> = sc.starts.iter().map(|s| s.label.as_str()).collect();
    let bad = || {
        CliError::usage(format!(
            "start {spec:?} is neither a label ({}) nor coordinates ({})",
            labels.join(", "),
            S::Point::column_names().join(",")
        ))
    };
    let cols = spec
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad())?;
    let point = S::Point::from_columns(&cols).ok_or_else(bad)?;
    sc.space
        .validate(&point)
        .map_err(|e| CliError::usage(format!("start {spec:?}: {e}")))?;
    Ok(point)
}
