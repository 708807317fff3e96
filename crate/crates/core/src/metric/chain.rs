use serde::{Deserialize, Serialize};

use super::{check_finite, Coordinates, GeometryError, MetricSpace, Result};

/// Slack allowed on the disc-radius constraint of a [`ChainPoint`].
pub const DISC_SLACK: f64 = 1e-12;

/// Flat solid torus: the cylinder `D(radius) x R` modulo the deck map
/// `(w, h) -> (R_twist w, h + circumference)`.
///
/// Equivalently `(w, h)` and `(R_{k*twist} w, h + k*circumference)` name the
/// same point for every integer `k`. Three cross-sectional discs sit at
/// `disc_heights`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistedChain {
    radius: f64,
    circumference: f64,
    twist: f64,
    disc_heights: [f64; 3],
}

/// A point of the twisted chain: disc coordinates and a height along the core.
///
/// Any finite height is a valid representative; [`TwistedChain::canonical`]
/// reduces it to `[0, circumference)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainPoint {
    pub disc: [f64; 2],
    pub height: f64,
}

impl ChainPoint {
    pub const fn new(u: f64, v: f64, height: f64) -> Self {
        Self {
            disc: [u, v],
            height,
        }
    }
}

/// Counter-clockwise rotation of `w` by `angle` radians.
pub fn rotate(w: [f64; 2], angle: f64) -> [f64; 2] {
    let (s, c) = angle.sin_cos();
    [c * w[0] - s * w[1], s * w[0] + c * w[1]]
}

impl TwistedChain {
    /// Chain with discs at heights `0`, `circumference / 3`, `2 * circumference / 3`.
    pub fn new(radius: f64, circumference: f64, twist: f64) -> Result<Self> {
        let l = circumference;
        Self::with_heights(radius, circumference, twist, [0.0, l / 3.0, 2.0 * l / 3.0])
    }

    pub fn with_heights(
        radius: f64,
        circumference: f64,
        twist: f64,
        disc_heights: [f64; 3],
    ) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(GeometryError::InvalidChain(format!(
                "radius {radius} must be positive"
            )));
        }
        if !(circumference.is_finite() && circumference > 0.0) {
            return Err(GeometryError::InvalidChain(format!(
                "circumference {circumference} must be positive"
            )));
        }
        check_finite(twist)?;
        let [h0, h1, h2] = disc_heights;
        if !(0.0 <= h0 && h0 < h1 && h1 < h2 && h2 < circumference) {
            return Err(GeometryError::InvalidChain(format!(
                "disc heights {disc_heights:?} must increase strictly inside [0, {circumference})"
            )));
        }
        // each projection in the cycle must move to the adjacent disc, which
        // is only the nearest lift when every gap is below half a loop
        let gaps = [h1 - h0, h2 - h1, circumference - h2 + h0];
        if let Some(g) = gaps.iter().find(|g| **g >= 0.5 * circumference) {
            return Err(GeometryError::InvalidChain(format!(
                "disc gap {g} is not below half the circumference {circumference}"
            )));
        }
        Ok(Self {
            radius,
            circumference,
            twist,
            disc_heights,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn circumference(&self) -> f64 {
        self.circumference
    }

    pub fn twist(&self) -> f64 {
        self.twist
    }

    pub fn disc_heights(&self) -> [f64; 3] {
        self.disc_heights
    }

    /// The representative of `(w, h)` sitting `wraps` loops higher.
    pub fn lift(&self, p: &ChainPoint, wraps: i64) -> ChainPoint {
        let k = wraps as f64;
        ChainPoint {
            disc: rotate(p.disc, k * self.twist),
            height: p.height + k * self.circumference,
        }
    }

    /// Same point, with height reduced to `[0, circumference)`.
    pub fn canonical(&self, p: &ChainPoint) -> ChainPoint {
        let wraps = (p.height / self.circumference).floor() as i64;
        let mut q = self.lift(p, -wraps);
        if q.height >= self.circumference {
            q = self.lift(&q, -1);
        }
        if q.height < 0.0 {
            q.height = 0.0;
        }
        q
    }

    /// Distance from `p` to the `wraps`-th lift of `q` in the universal cover.
    pub(crate) fn lifted_distance(&self, p: &ChainPoint, q: &ChainPoint, wraps: i64) -> f64 {
        let lq = self.lift(q, wraps);
        let du = p.disc[0] - lq.disc[0];
        let dv = p.disc[1] - lq.disc[1];
        du.hypot(dv).hypot(p.height - lq.height)
    }

    /// Half-width of the lift window scanned by [`MetricSpace::distance`].
    pub(crate) fn lift_window(&self, height_gap: f64) -> i64 {
        2 + ((height_gap.abs() + self.circumference) / self.circumference).ceil() as i64
    }
}

impl MetricSpace for TwistedChain {
    type Point = ChainPoint;

    fn validate(&self, p: &ChainPoint) -> Result<()> {
        check_finite(p.disc[0])?;
        check_finite(p.disc[1])?;
        check_finite(p.height)?;
        let [u, v] = p.disc;
        if u * u + v * v > self.radius * self.radius + DISC_SLACK {
            return Err(GeometryError::OutsideDisc {
                u,
                v,
                radius: self.radius,
            });
        }
        Ok(())
    }

    /// Quotient distance: the minimum over lifts of `q` of the Euclidean
    /// distance in the cylinder. Lifts outside the window are at least one
    /// full loop farther vertically than an enumerated one.
    fn distance(&self, p: &ChainPoint, q: &ChainPoint) -> Result<f64> {
        self.validate(p)?;
        self.validate(q)?;
        let gap = p.height - q.height;
        let center = (gap / self.circumference).round() as i64;
        let window = self.lift_window(gap);
        Ok((center - window..=center + window)
            .map(|k| self.lifted_distance(p, q, k))
            .fold(f64::INFINITY, f64::min))
    }
}

impl Coordinates for ChainPoint {
    fn column_names() -> Vec<&'static str> {
        vec!["u", "v", "height"]
    }

    fn to_columns(&self) -> Vec<f64> {
        vec![self.disc[0], self.disc[1], self.height]
    }

    fn from_columns(cols: &[f64]) -> Option<Self> {
        match cols {
            [u, v, h] => Some(ChainPoint::new(*u, *v, *h)),
            _ => None,
        }
    }
}
