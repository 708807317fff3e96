//! Cyclic projections onto convex subsets of CAT(0) spaces.
//!
//! The crate models a handful of Hadamard spaces exactly (star trees, their
//! products, the plane) together with a flat twisted solid torus, projects
//! onto convex sets inside them, and iterates the cyclic product
//! `P = P_1 o ... o P_k` while recording step sizes and the two-set
//! diagnostics needed to judge asymptotic regularity.

pub mod convex;
pub mod engine;
pub mod metric;
pub mod scenarios;

pub use convex::{ConvexSet, ProjectionOptions, ProjectionResult, ProjectionSpace, Solver};
pub use engine::{Classification, RegularityVerdict, Trace};
pub use metric::{GeodesicSpace, MetricSpace};
