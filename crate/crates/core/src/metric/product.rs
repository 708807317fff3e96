use serde::{Deserialize, Serialize};

use super::{Coordinates, GeodesicSpace, MetricSpace, RealLine, Result, StarPoint, StarTree};

/// l2 product of two metric spaces: `d = sqrt(d_left^2 + d_right^2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductSpace<L, R> {
    pub left: L,
    pub right: R,
}

/// Product of two star trees.
pub type TripodProduct = ProductSpace<StarTree, StarTree>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductPoint<P, Q> {
    pub left: P,
    pub right: Q,
}

impl<P, Q> ProductPoint<P, Q> {
    pub const fn new(left: P, right: Q) -> Self {
        Self { left, right }
    }
}

impl<L, R> ProductSpace<L, R> {
    pub const fn new(left: L, right: R) -> Self {
        Self { left, right }
    }
}

impl TripodProduct {
    pub fn unit_tripods() -> Self {
        Self::new(StarTree::tripod(), StarTree::tripod())
    }
}

impl ProductSpace<RealLine, RealLine> {
    /// The plane written as a product of two lines.
    pub const fn plane() -> Self {
        Self::new(RealLine, RealLine)
    }
}

impl<L: MetricSpace, R: MetricSpace> MetricSpace for ProductSpace<L, R> {
    type Point = ProductPoint<L::Point, R::Point>;

    fn validate(&self, p: &Self::Point) -> Result<()> {
        self.left.validate(&p.left)?;
        self.right.validate(&p.right)
    }

    fn distance(&self, p: &Self::Point, q: &Self::Point) -> Result<f64> {
        let dl = self.left.distance(&p.left, &q.left)?;
        let dr = self.right.distance(&p.right, &q.right)?;
        Ok(dl.hypot(dr))
    }
}

impl<L: GeodesicSpace, R: GeodesicSpace> GeodesicSpace for ProductSpace<L, R> {
    fn geodesic(&self, p: &Self::Point, q: &Self::Point, t: f64) -> Result<Self::Point> {
        Ok(ProductPoint::new(
            self.left.geodesic(&p.left, &q.left, t)?,
            self.right.geodesic(&p.right, &q.right, t)?,
        ))
    }
}

impl Coordinates for ProductPoint<StarPoint, StarPoint> {
    fn column_names() -> Vec<&'static str> {
        vec!["left_leg", "left_offset", "right_leg", "right_offset"]
    }

    fn to_columns(&self) -> Vec<f64> {
        let mut cols = self.left.to_columns();
        cols.extend(self.right.to_columns());
        cols
    }

    fn from_columns(cols: &[f64]) -> Option<Self> {
        if cols.len() != 4 {
            return None;
        }
        Some(ProductPoint::new(
            StarPoint::from_columns(&cols[..2])?,
            StarPoint::from_columns(&cols[2..])?,
        ))
    }
}
