//! Metric spaces used by the projection machinery.
//!
//! Every space here is modeled exactly: distances are closed-form expressions
//! in `f64`, and geodesics (where the space provides them) are constant-speed
//! parametrizations over `[0, 1]`.
//!
//! * [`StarTree`]: a metric tree with one branch point and `k >= 3` legs.
//! * [`Plane`] and [`RealLine`]: Euclidean factors.
//! * [`ProductSpace`]: the l2 product of two geodesic spaces.
//! * [`TwistedChain`]: a flat solid torus glued with a rotation. It is not
//!   simply connected, so it only implements [`MetricSpace`].

mod chain;
mod plane;
mod product;
mod star;

pub use chain::{rotate, ChainPoint, TwistedChain, DISC_SLACK};
pub use plane::{Plane, PlanePoint, RealLine};
pub use product::{ProductPoint, ProductSpace, TripodProduct};
pub use star::{StarPoint, StarTree};

use std::f64::consts::PI;
use std::fmt::Debug;

use thiserror::Error;

/// Tolerance applied to the law-of-cosines argument before clamping to `[-1, 1]`.
pub const ANGLE_CLAMP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("leg index {leg} out of range for a tree with {legs} legs")]
    InvalidLeg { leg: usize, legs: usize },
    #[error("offset {offset} outside [0, {length}] on leg {leg}")]
    OffsetOutOfRange {
        leg: usize,
        offset: f64,
        length: f64,
    },
    #[error("star tree needs at least 3 legs, got {0}")]
    TooFewLegs(usize),
    #[error("leg lengths must be positive and finite, got {0}")]
    InvalidLegLength(f64),
    #[error("geodesic parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),
    #[error("non-finite coordinate {0}")]
    NonFinite(f64),
    #[error("disc coordinates ({u}, {v}) lie outside radius {radius}")]
    OutsideDisc { u: f64, v: f64, radius: f64 },
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("comparison angle undefined: adjacent side has length {0}")]
    UndefinedAngle(f64),
    #[error("side lengths ({0}, {1}, {2}) violate the triangle inequality")]
    TriangleInequality(f64, f64, f64),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;

/// A metric space with a point type that can be validated and measured.
pub trait MetricSpace {
    type Point: Clone + Debug + PartialEq;

    fn validate(&self, p: &Self::Point) -> Result<()>;

    fn distance(&self, p: &Self::Point, q: &Self::Point) -> Result<f64>;
}

/// A uniquely geodesic space.
pub trait GeodesicSpace: MetricSpace {
    /// Point at parameter `t` on the constant-speed geodesic from `p` to `q`.
    fn geodesic(&self, p: &Self::Point, q: &Self::Point, t: f64) -> Result<Self::Point>;

    fn midpoint(&self, p: &Self::Point, q: &Self::Point) -> Result<Self::Point> {
        self.geodesic(p, q, 0.5)
    }
}

/// Flat numeric view of a point, used for CSV export and re-import.
pub trait Coordinates: Sized {
    fn column_names() -> Vec<&'static str>;
    fn to_columns(&self) -> Vec<f64>;
    fn from_columns(cols: &[f64]) -> Option<Self>;
}

pub(crate) fn check_parameter(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(GeometryError::ParameterOutOfRange(t))
    }
}

pub(crate) fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(GeometryError::NonFinite(x))
    }
}

/// Angle at vertex `a` of the Euclidean triangle with side lengths
/// `d_ab`, `d_ac`, `d_bc`.
pub fn comparison_angle(d_ab: f64, d_ac: f64, d_bc: f64) -> Result<f64> {
    for side in [d_ab, d_ac] {
        if side.is_nan() || side <= 0.0 {
            return Err(GeometryError::UndefinedAngle(side));
        }
    }
    let cos = (d_ab * d_ab + d_ac * d_ac - d_bc * d_bc) / (2.0 * d_ab * d_ac);
    if !cos.is_finite() || cos.abs() > 1.0 + ANGLE_CLAMP_TOL {
        return Err(GeometryError::TriangleInequality(d_ab, d_ac, d_bc));
    }
    Ok(cos.clamp(-1.0, 1.0).acos().clamp(0.0, PI))
}

/// Margin of the CN inequality
/// `d(x,m)^2 <= d(x,y)^2 / 2 + d(x,z)^2 / 2 - d(y,z)^2 / 4`, with `m` the midpoint of `[y, z]`.
///
/// Returns right-hand side minus left-hand side; a CAT(0) space keeps it nonnegative.
pub fn cn_check<S: GeodesicSpace>(
    space: &S,
    x: &S::Point,
    y: &S::Point,
    z: &S::Point,
) -> Result<f64> {
    let m = space.midpoint(y, z)?;
    let xm = space.distance(x, &m)?;
    let xy = space.distance(x, y)?;
    let xz = space.distance(x, z)?;
    let yz = space.distance(y, z)?;
    Ok(0.5 * xy * xy + 0.5 * xz * xz - 0.25 * yz * yz - xm * xm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparison_angle_examples() {
        assert!((comparison_angle(1.0, 1.0, 1.0).unwrap() - PI / 3.0).abs() < 1e-15);
        assert!((comparison_angle(3.0, 4.0, 5.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((comparison_angle(1.0, 1.0, 2.0).unwrap() - PI).abs() < 1e-15);
    }

    #[test]
    fn comparison_angle_rejects_zero_side() {
        assert!(matches!(
            comparison_angle(0.0, 1.0, 1.0),
            Err(GeometryError::UndefinedAngle(_))
        ));
        assert!(matches!(
            comparison_angle(1.0, 0.0, 1.0),
            Err(GeometryError::UndefinedAngle(_))
        ));
    }

    #[test]
    fn comparison_angle_clamps_rounding_but_not_violations() {
        // 1 + 1 = 2 + 1e-12: within clamp tolerance
        assert!((comparison_angle(1.0, 1.0, 2.0 + 1e-12).unwrap() - PI).abs() < 1e-5);
        assert!(matches!(
            comparison_angle(1.0, 1.0, 2.5),
            Err(GeometryError::TriangleInequality(..))
        ));
    }

    #[test]
    fn cn_margin_is_zero_in_euclidean_equality_case() {
        let plane = Plane;
        let x = PlanePoint::new(0.0, 0.0);
        let y = PlanePoint::new(2.0, 0.0);
        let z = PlanePoint::new(0.0, 2.0);
        assert!(cn_check(&plane, &x, &y, &z).unwrap().abs() < 1e-14);
        assert!(cn_check(&plane, &x, &y, &y).unwrap().abs() < 1e-14);
    }

    #[test]
    fn cn_margin_with_coincident_endpoints_in_tripod_product() {
        let space = TripodProduct::unit_tripods();
        let x = ProductPoint::new(StarPoint::new(0, 0.4), StarPoint::new(2, 0.9));
        let y = ProductPoint::new(StarPoint::new(1, 0.7), StarPoint::new(1, 0.2));
        assert!(cn_check(&space, &x, &y, &y).unwrap().abs() < 1e-14);
    }
}
