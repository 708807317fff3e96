use serde::{Deserialize, Serialize};

use super::{
    check_finite, check_parameter, Coordinates, GeodesicSpace, GeometryError, MetricSpace, Result,
};

/// Metric tree made of `legs.len() >= 3` segments glued at a common endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarTree {
    legs: Vec<f64>,
}

impl StarTree {
    pub fn new(leg_lengths: Vec<f64>) -> Result<Self> {
        if leg_lengths.len() < 3 {
            return Err(GeometryError::TooFewLegs(leg_lengths.len()));
        }
        if let Some(&bad) = leg_lengths.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(GeometryError::InvalidLegLength(bad));
        }
        Ok(Self { legs: leg_lengths })
    }

    /// Three unit legs.
    pub fn tripod() -> Self {
        Self { legs: vec![1.0; 3] }
    }

    pub fn leg_count(&self) -> usize {
        self.legs.len()
    }

    pub fn leg_length(&self, leg: usize) -> Option<f64> {
        self.legs.get(leg).copied()
    }
}

/// A point of a star tree: a leg index and the distance from the center.
///
/// The center is always stored as `leg == 0`, so derived equality is exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarPoint {
    leg: usize,
    offset: f64,
}

impl StarPoint {
    pub fn new(leg: usize, offset: f64) -> Self {
        if offset == 0.0 {
            Self::center()
        } else {
            Self { leg, offset }
        }
    }

    pub const fn center() -> Self {
        Self {
            leg: 0,
            offset: 0.0,
        }
    }

    pub fn leg(&self) -> usize {
        self.leg
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn is_center(&self) -> bool {
        self.offset == 0.0
    }

    /// Whether the point lies on `leg`, counting the center as part of every leg.
    pub fn on_leg(&self, leg: usize) -> bool {
        self.is_center() || self.leg == leg
    }
}

impl MetricSpace for StarTree {
    type Point = StarPoint;

    fn validate(&self, p: &StarPoint) -> Result<()> {
        check_finite(p.offset)?;
        let length = self.leg_length(p.leg).ok_or(GeometryError::InvalidLeg {
            leg: p.leg,
            legs: self.legs.len(),
        })?;
        if p.offset < 0.0 || p.offset > length {
            return Err(GeometryError::OffsetOutOfRange {
                leg: p.leg,
                offset: p.offset,
                length,
            });
        }
        Ok(())
    }

    fn distance(&self, p: &StarPoint, q: &StarPoint) -> Result<f64> {
        self.validate(p)?;
        self.validate(q)?;
        Ok(if p.leg == q.leg {
            (p.offset - q.offset).abs()
        } else {
            p.offset + q.offset
        })
    }
}

impl GeodesicSpace for StarTree {
    fn geodesic(&self, p: &StarPoint, q: &StarPoint, t: f64) -> Result<StarPoint> {
        check_parameter(t)?;
        self.validate(p)?;
        self.validate(q)?;
        if t == 0.0 {
            return Ok(*p);
        }
        if t == 1.0 {
            return Ok(*q);
        }
        if p.leg == q.leg {
            return Ok(StarPoint::new(p.leg, p.offset + t * (q.offset - p.offset)));
        }
        // walk in through the center, then out along q's leg
        let walked = t * (p.offset + q.offset);
        Ok(if walked <= p.offset {
            StarPoint::new(p.leg, p.offset - walked)
        } else {
            StarPoint::new(q.leg, (walked - p.offset).min(q.offset))
        })
    }
}

impl Coordinates for StarPoint {
    fn column_names() -> Vec<&'static str> {
        vec!["leg", "offset"]
    }

    fn to_columns(&self) -> Vec<f64> {
        vec![self.leg as f64, self.offset]
    }

    fn from_columns(cols: &[f64]) -> Option<Self> {
        match cols {
            [leg, offset] if *leg >= 0.0 && leg.fract() == 0.0 => {
                Some(StarPoint::new(*leg as usize, *offset))
            }
            _ => None,
        }
    }
}
