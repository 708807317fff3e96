//! Closest-point projections onto the convex sets used by the scenarios.
//!
//! Each ambient space implements [`ProjectionSpace`] for the set shapes it
//! supports. Results carry a [`Solver`] tag so callers can tell an exact
//! projection from a numerically located one.

mod chain;
mod distance;
mod golden;
mod plane;
mod tree;

pub use chain::project_cross_disc;
pub use distance::{segment_pair_distance, set_distance, Sampler};
pub use golden::{golden_iterations, golden_section_minimize, project_segment_generic};
pub use plane::{project_axis, project_epigraph, project_line, project_segment_plane};
pub use tree::project_segment_tree_exact;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{GeometryError, MetricSpace, Plane, PlanePoint, TripodProduct, TwistedChain};

/// A projectable closed convex set, described in the coordinates of its ambient space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ConvexSet<P> {
    /// Geodesic segment between two points.
    Segment { start: P, end: P },
    /// The x-axis of the plane.
    AxisLine,
    /// Line of the plane through the origin at `angle` radians from the x-axis.
    Line { angle: f64 },
    /// `{(x, y) : x > 0, y >= 1 + x^(-epsilon)}`.
    Epigraph { epsilon: f64 },
    /// Cross-sectional disc `disc_index` of a twisted chain.
    CrossDisc { disc_index: usize },
}

impl<P> ConvexSet<P> {
    pub fn kind(&self) -> &'static str {
        match self {
            ConvexSet::Segment { .. } => "segment",
            ConvexSet::AxisLine => "axis",
            ConvexSet::Line { .. } => "line",
            ConvexSet::Epigraph { .. } => "epigraph",
            ConvexSet::CrossDisc { .. } => "cross-disc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    ClosedForm,
    ExactPiecewise,
    GoldenSection,
    Newton,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult<P> {
    pub point: P,
    /// Distance from the input to `point`.
    pub distance: f64,
    pub solver: Solver,
}

/// Which projector to use for geodesic segments.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentSolver {
    /// Closed form where the space has one, generic search otherwise.
    #[default]
    Exact,
    /// Golden-section search along the segment.
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionOptions {
    /// Parameter tolerance for golden-section search, residual tolerance for root finding.
    pub tol: f64,
    pub segment_solver: SegmentSolver,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            segment_solver: SegmentSolver::Exact,
        }
    }
}

impl ProjectionOptions {
    pub fn generic(tol: f64) -> Self {
        Self {
            tol,
            segment_solver: SegmentSolver::Generic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProjectionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("epigraph exponent must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("{set} sets are not supported in this space")]
    UnsupportedSet { set: &'static str },
    #[error("segment shape not supported by the exact projector: {0}")]
    UnsupportedShape(String),
    #[error("disc index {0} out of range")]
    InvalidDisc(usize),
    #[error("closest point is ambiguous: lifts {first} and {second} are equally near")]
    AmbiguousProjection { first: i64, second: i64 },
    #[error(
        "numerical failure projecting ({x}, {y}) onto epigraph with epsilon {epsilon}: {reason}"
    )]
    NumericalFailure {
        x: f64,
        y: f64,
        epsilon: f64,
        reason: String,
    },
}

pub type Result<T, E = ProjectionError> = std::result::Result<T, E>;

/// A metric space that knows how to project onto some [`ConvexSet`] shapes.
pub trait ProjectionSpace: MetricSpace {
    fn project(
        &self,
        set: &ConvexSet<Self::Point>,
        x: &Self::Point,
        opts: &ProjectionOptions,
    ) -> Result<ProjectionResult<Self::Point>>;

    /// Distance from `x` to `set`.
    fn set_gap(
        &self,
        set: &ConvexSet<Self::Point>,
        x: &Self::Point,
        opts: &ProjectionOptions,
    ) -> Result<f64> {
        Ok(self.project(set, x, opts)?.distance)
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(ProjectionError::InvalidTolerance(tol))
    }
}

impl ProjectionSpace for Plane {
    fn project(
        &self,
        set: &ConvexSet<PlanePoint>,
        x: &PlanePoint,
        opts: &ProjectionOptions,
    ) -> Result<ProjectionResult<PlanePoint>> {
        self.validate(x)?;
        match set {
            ConvexSet::Segment { start, end } => match opts.segment_solver {
                SegmentSolver::Exact => project_segment_plane(start, end, x),
                SegmentSolver::Generic => project_segment_generic(self, start, end, x, opts.tol),
            },
            ConvexSet::AxisLine => Ok(project_axis(x)),
            ConvexSet::Line { angle } => Ok(project_line(*angle, x)),
            ConvexSet::Epigraph { epsilon } => project_epigraph(*epsilon, x, opts.tol),
            ConvexSet::CrossDisc { .. } => Err(ProjectionError::UnsupportedSet { set: set.kind() }),
        }
    }
}

impl ProjectionSpace for TripodProduct {
    fn project(
        &self,
        set: &ConvexSet<Self::Point>,
        x: &Self::Point,
        opts: &ProjectionOptions,
    ) -> Result<ProjectionResult<Self::Point>> {
        match set {
            ConvexSet::Segment { start, end } => match opts.segment_solver {
                SegmentSolver::Exact => project_segment_tree_exact(self, start, end, x),
                SegmentSolver::Generic => project_segment_generic(self, start, end, x, opts.tol),
            },
            _ => Err(ProjectionError::UnsupportedSet { set: set.kind() }),
        }
    }
}

impl ProjectionSpace for TwistedChain {
    fn project(
        &self,
        set: &ConvexSet<Self::Point>,
        x: &Self::Point,
        _opts: &ProjectionOptions,
    ) -> Result<ProjectionResult<Self::Point>> {
        match set {
            ConvexSet::CrossDisc { disc_index } => project_cross_disc(self, *disc_index, x),
            _ => Err(ProjectionError::UnsupportedSet { set: set.kind() }),
        }
    }
}
