use serde::{Deserialize, Serialize};

use super::{check_finite, check_parameter, Coordinates, GeodesicSpace, MetricSpace, Result};

/// The Euclidean plane.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Plane;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl MetricSpace for Plane {
    type Point = PlanePoint;

    fn validate(&self, p: &PlanePoint) -> Result<()> {
        check_finite(p.x)?;
        check_finite(p.y)
    }

    fn distance(&self, p: &PlanePoint, q: &PlanePoint) -> Result<f64> {
        self.validate(p)?;
        self.validate(q)?;
        Ok((p.x - q.x).hypot(p.y - q.y))
    }
}

impl GeodesicSpace for Plane {
    fn geodesic(&self, p: &PlanePoint, q: &PlanePoint, t: f64) -> Result<PlanePoint> {
        check_parameter(t)?;
        self.validate(p)?;
        self.validate(q)?;
        Ok(PlanePoint::new(
            p.x + t * (q.x - p.x),
            p.y + t * (q.y - p.y),
        ))
    }
}

impl Coordinates for PlanePoint {
    fn column_names() -> Vec<&'static str> {
        vec!["x", "y"]
    }

    fn to_columns(&self) -> Vec<f64> {
        vec![self.x, self.y]
    }

    fn from_columns(cols: &[f64]) -> Option<Self> {
        match cols {
            [x, y] => Some(PlanePoint::new(*x, *y)),
            _ => None,
        }
    }
}

/// The real line, mostly useful as a product factor.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RealLine;

impl MetricSpace for RealLine {
    type Point = f64;

    fn validate(&self, p: &f64) -> Result<()> {
        check_finite(*p)
    }

    fn distance(&self, p: &f64, q: &f64) -> Result<f64> {
        self.validate(p)?;
        self.validate(q)?;
        Ok((p - q).abs())
    }
}

impl GeodesicSpace for RealLine {
    fn geodesic(&self, p: &f64, q: &f64, t: f64) -> Result<f64> {
        check_parameter(t)?;
        self.validate(p)?;
        self.validate(q)?;
        Ok(p + t * (q - p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_geodesic_midpoint() {
        let m = Plane
            .geodesic(&PlanePoint::new(0.0, 0.0), &PlanePoint::new(2.0, 2.0), 0.5)
            .unwrap();
        assert_eq!(m, PlanePoint::new(1.0, 1.0));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(Plane
            .distance(&PlanePoint::new(f64::NAN, 0.0), &PlanePoint::new(0.0, 0.0))
            .is_err());
        assert!(RealLine.distance(&f64::INFINITY, &0.0).is_err());
    }
}
