//! The cyclic projection iteration and its diagnostics.
//!
//! Composition is rightmost-first: `P(x) = P_1(P_2(...P_k(x)))`. Step sizes are
//! always measured between consecutive iterates `x_n = P^n(x_0)` and
//! `x_{n+1}`, never between intermediate points.
//!
//! For two sets the trace also follows `y_{n+1} = P_2(x_n)`, and records
//! `a_n = d(x_n, y_n)`, `b_n = d(y_{n+1}, x_n)` and `s_n = d(y_n, y_{n+1})`.

mod diagnostics;

pub use diagnostics::{
    fit_power_law, rate_fit, two_set_diagnostics, verdict, Classification, RateFit,
    RegularityVerdict, TwoSetReport, DEFAULT_R_TOL, DEFAULT_TAIL_FRACTION,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::convex::{ConvexSet, ProjectionError, ProjectionOptions, ProjectionSpace};
use crate::metric::GeometryError;

/// Above this many cycles the trace keeps only every `stride`-th point.
pub const FULL_STORAGE_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("the cyclic product needs at least one set")]
    NoSets,
    #[error("iteration count must be at least 1")]
    NoIterations,
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Projection(#[from] ProjectionError),
}

impl From<GeometryError> for EngineError {
    fn from(e: GeometryError) -> Self {
        EngineError::Projection(e.into())
    }
}

pub type Result<T, E = EngineError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct IterateOptions {
    pub projection: ProjectionOptions,
    /// Keep the iterate of every `stride`-th cycle. `None` keeps all of them up
    /// to [`FULL_STORAGE_LIMIT`] cycles and thins evenly beyond that.
    pub stride: Option<usize>,
}

impl IterateOptions {
    pub fn with_projection(projection: ProjectionOptions) -> Self {
        Self {
            projection,
            stride: None,
        }
    }

    fn stride_for(&self, cycles: usize) -> usize {
        match self.stride {
            Some(s) => s.max(1),
            None if cycles <= FULL_STORAGE_LIMIT => 1,
            None => cycles.div_ceil(FULL_STORAGE_LIMIT),
        }
    }
}

/// A stored iterate together with the points visited while applying `P` to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot<P> {
    pub n: usize,
    pub point: P,
    /// `P_k(x_n)`, `P_{k-1}(P_k(x_n))`, ..., ending with `x_{n+1}`.
    pub intermediates: Vec<P>,
}

/// Scalar series specific to two-set iterations, indexed by `n`.
///
/// `a` has one entry more than the number of cycles; `a[0]` and `s[0]` are
/// undefined and stored as NaN.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TwoSetSeries {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub s: Vec<f64>,
}

fn defined(v: Option<&f64>) -> Option<f64> {
    v.copied().filter(|x| !x.is_nan())
}

impl TwoSetSeries {
    pub fn a(&self, n: usize) -> Option<f64> {
        defined(self.a.get(n))
    }

    pub fn b(&self, n: usize) -> Option<f64> {
        defined(self.b.get(n))
    }

    pub fn s(&self, n: usize) -> Option<f64> {
        defined(self.s.get(n))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace<P> {
    pub start: P,
    pub set_count: usize,
    /// `steps[n] = r_n = d(x_n, x_{n+1})`.
    pub steps: Vec<f64>,
    pub two_set: Option<TwoSetSeries>,
    pub snapshots: Vec<Snapshot<P>>,
    /// The last iterate reached.
    pub last: P,
    pub stride: usize,
    /// Set when a projection failed part way; the trace holds what was computed before.
    pub aborted: Option<String>,
}

impl<P> Trace<P> {
    pub fn cycles(&self) -> usize {
        self.steps.len()
    }

    pub fn r(&self, n: usize) -> Option<f64> {
        self.steps.get(n).copied()
    }

    pub fn is_complete(&self) -> bool {
        self.aborted.is_none()
    }
}

/// Values observed after each cycle, handed to the callback of [`iterate_with`].
#[derive(Debug)]
pub struct StepView<'a, P> {
    pub n: usize,
    pub point: &'a P,
    pub next: &'a P,
    pub intermediates: &'a [P],
    pub r: f64,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub s: Option<f64>,
}

/// One application of the cyclic product to `x`.
///
/// Returns `P(x)` and the `k` points produced in application order, the last
/// of which is `P(x)`.
pub fn cycle_apply<S: ProjectionSpace>(
    space: &S,
    sets: &[ConvexSet<S::Point>],
    x: &S::Point,
    opts: &ProjectionOptions,
) -> Result<(S::Point, Vec<S::Point>)> {
    if sets.is_empty() {
        return Err(EngineError::NoSets);
    }
    let mut visited = Vec::with_capacity(sets.len());
    let mut current = x.clone();
    for set in sets.iter().rev() {
        current = space.project(set, &current, opts)?.point;
        visited.push(current.clone());
    }
    Ok((current, visited))
}

/// Runs `cycles` applications of the cyclic product from `start`.
pub fn iterate<S: ProjectionSpace>(
    space: &S,
    sets: &[ConvexSet<S::Point>],
    start: &S::Point,
    cycles: usize,
    opts: &IterateOptions,
) -> Result<Trace<S::Point>> {
    iterate_with(space, sets, start, cycles, opts, |_| {})
}

/// [`iterate`] with a callback invoked after every cycle, so callers can
/// stream full-resolution output while the stored trace stays thinned.
pub fn iterate_with<S, F>(
    space: &S,
    sets: &[ConvexSet<S::Point>],
    start: &S::Point,
    cycles: usize,
    opts: &IterateOptions,
    mut observe: F,
) -> Result<Trace<S::Point>>
where
    S: ProjectionSpace,
    F: FnMut(&StepView<'_, S::Point>),
{
    if sets.is_empty() {
        return Err(EngineError::NoSets);
    }
    if cycles == 0 {
        return Err(EngineError::NoIterations);
    }
    space.validate(start)?;
    let stride = opts.stride_for(cycles);
    let two_sets = sets.len() == 2;
    let mut trace = Trace {
        start: start.clone(),
        set_count: sets.len(),
        steps: Vec::with_capacity(cycles),
        two_set: two_sets.then(|| TwoSetSeries {
            a: Vec::with_capacity(cycles + 1),
            b: Vec::with_capacity(cycles),
            s: Vec::with_capacity(cycles),
        }),
        snapshots: Vec::new(),
        last: start.clone(),
        stride,
        aborted: None,
    };
    let mut x = start.clone();
    // y_n from the previous cycle
    let mut prev_y: Option<S::Point> = None;
    for n in 0..cycles {
        let (next, visited) = match cycle_apply(space, sets, &x, &opts.projection) {
            Ok(v) => v,
            Err(e) => {
                trace.aborted = Some(format!("cycle {n}: {e}"));
                break;
            }
        };
        let measured = (|| -> Result<_> {
            let r = space.distance(&x, &next)?;
            if !two_sets {
                return Ok((r, None, None, None));
            }
            let y = &visited[0];
            let a = prev_y
                .as_ref()
                .map(|py| space.distance(&x, py))
                .transpose()?;
            let b = space.distance(y, &x)?;
            let s = prev_y
                .as_ref()
                .map(|py| space.distance(py, y))
                .transpose()?;
            Ok((r, a, Some(b), s))
        })();
        let (r, a, b, s) = match measured {
            Ok(v) => v,
            Err(e) => {
                trace.aborted = Some(format!("cycle {n}: {e}"));
                break;
            }
        };
        observe(&StepView {
            n,
            point: &x,
            next: &next,
            intermediates: &visited,
            r,
            a,
            b,
            s,
        });
        trace.steps.push(r);
        if let Some(series) = trace.two_set.as_mut() {
            series.a.push(a.unwrap_or(f64::NAN));
            series.b.push(b.unwrap_or(f64::NAN));
            series.s.push(s.unwrap_or(f64::NAN));
        }
        if n % stride == 0 {
            trace.snapshots.push(Snapshot {
                n,
                point: x.clone(),
                intermediates: visited.clone(),
            });
        }
        if two_sets {
            prev_y = Some(visited[0].clone());
        }
        x = next;
    }
    // a_N closes the series so the energy bound can be checked at the last cycle
    if let (Some(series), Some(y)) = (trace.two_set.as_mut(), prev_y.as_ref()) {
        let a_last = space.distance(&x, y).unwrap_or(f64::NAN);
        series.a.push(a_last);
    }
    trace.last = x;
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{MetricSpace, Plane, PlanePoint};

    fn two_lines(theta: f64) -> Vec<ConvexSet<PlanePoint>> {
        vec![ConvexSet::AxisLine, ConvexSet::Line { angle: theta }]
    }

    #[test]
    fn single_set_is_one_projection() {
        let sets = vec![ConvexSet::AxisLine];
        let (p, visited) = cycle_apply(
            &Plane,
            &sets,
            &PlanePoint::new(2.0, 3.0),
            &Default::default(),
        )
        .unwrap();
        assert_eq!(p, PlanePoint::new(2.0, 0.0));
        assert_eq!(visited, vec![p]);
    }

    #[test]
    fn two_lines_decay_geometrically() {
        let theta = std::f64::consts::FRAC_PI_4;
        let trace = iterate(
            &Plane,
            &two_lines(theta),
            &PlanePoint::new(1.0, 0.0),
            50,
            &Default::default(),
        )
        .unwrap();
        for n in 0..49 {
            let ratio = trace.r(n + 1).unwrap() / trace.r(n).unwrap();
            assert!((ratio - theta.cos().powi(2)).abs() < 1e-9);
        }
    }

    #[test]
    fn two_set_series_follow_definitions() {
        let trace = iterate(
            &Plane,
            &two_lines(0.3),
            &PlanePoint::new(1.0, 0.5),
            5,
            &Default::default(),
        )
        .unwrap();
        let series = trace.two_set.as_ref().unwrap();
        assert_eq!(series.a.len(), 6);
        assert_eq!(series.a(0), None);
        assert_eq!(series.s(0), None);
        // y_1 = P_2(x_0), x_1 = P_1(y_1)
        let y1 = &trace.snapshots[0].intermediates[0];
        let x1 = &trace.snapshots[1].point;
        let x0 = &trace.start;
        assert!((series.b(0).unwrap() - Plane.distance(y1, x0).unwrap()).abs() < 1e-15);
        assert!((series.a(1).unwrap() - Plane.distance(x1, y1).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn preconditions_are_checked() {
        let start = PlanePoint::new(1.0, 0.0);
        assert_eq!(
            iterate::<Plane>(&Plane, &[], &start, 3, &Default::default()).unwrap_err(),
            EngineError::NoSets
        );
        assert_eq!(
            iterate(&Plane, &two_lines(0.3), &start, 0, &Default::default()).unwrap_err(),
            EngineError::NoIterations
        );
    }

    #[test]
    fn failure_leaves_partial_trace() {
        let sets = vec![ConvexSet::AxisLine, ConvexSet::CrossDisc { disc_index: 0 }];
        let trace = iterate(
            &Plane,
            &sets,
            &PlanePoint::new(1.0, 0.0),
            10,
            &Default::default(),
        )
        .unwrap();
        assert!(!trace.is_complete());
        assert_eq!(trace.cycles(), 0);
    }

    #[test]
    fn long_runs_are_thinned() {
        let opts = IterateOptions {
            stride: Some(10),
            ..Default::default()
        };
        let trace = iterate(
            &Plane,
            &two_lines(0.3),
            &PlanePoint::new(1.0, 0.0),
            95,
            &opts,
        )
        .unwrap();
        assert_eq!(trace.cycles(), 95);
        assert_eq!(trace.snapshots.len(), 10);
        assert_eq!(IterateOptions::default().stride_for(1_000_000), 10);
        assert_eq!(IterateOptions::default().stride_for(1000), 1);
    }
}
