//! Named configurations of convex sets with pinned coordinates.
//!
//! * [`build_tripod_counterexample`]: three unit segments of slope -1 in the
//!   product of two tripods. Each projection maps the previous segment onto
//!   the next one reversing orientation, so the cyclic product swaps the ends
//!   of `C_1` and its steps never shrink.
//! * [`build_plane_two_sets`]: the x-axis against the epigraph of
//!   `1 + x^(-epsilon)`. The sets do not meet, the gap is approached only at
//!   infinity, and the steps decay slower than any `n^(-1/2 - epsilon)`.
//! * [`build_twisted_chain`]: three discs in a flat solid torus whose cyclic
//!   product rotates the first disc by the twist angle.
//! * [`build_plane_two_lines`]: two lines through the origin, a converging
//!   control case.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::convex::ConvexSet;
use crate::metric::{
    ChainPoint, GeometryError, MetricSpace, Plane, PlanePoint, ProductPoint, StarPoint,
    TripodProduct, TwistedChain,
};

/// Half the parameter range of each tripod segment around leg offset 1/2.
pub const TRIPOD_HALF_WIDTH: f64 = SQRT_2 / 4.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("invalid scenario parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub type Result<T, E = ScenarioError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expected {
    /// Steps stay at or above `bound` forever.
    NotRegular { bound: f64 },
    /// Steps go to zero.
    Regular,
    /// Steps go to zero as `o(n^(-1/2))` and no faster than the stated exponent.
    RegularWithRate { predicted_slope: f64 },
    /// The start is a fixed point of the cyclic product after the first cycle.
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Start<P> {
    pub label: String,
    pub point: P,
    pub expected: Expected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<S: MetricSpace> {
    pub name: String,
    pub space: S,
    /// `C_1, ..., C_k`; the cyclic product applies `C_k` first.
    pub sets: Vec<ConvexSet<S::Point>>,
    pub starts: Vec<Start<S::Point>>,
    pub expected: Expected,
    pub note: String,
}

impl<S: MetricSpace> Scenario<S> {
    pub fn start(&self, label: &str) -> Option<&Start<S::Point>> {
        self.starts.iter().find(|s| s.label == label)
    }

    pub fn default_start(&self) -> &Start<S::Point> {
        &self.starts[0]
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    /// Sets whose cyclic product is `P^m`.
    pub fn power_sets(&self, m: usize) -> Vec<ConvexSet<S::Point>> {
        self.sets
            .iter()
            .cycle()
            .take(self.sets.len() * m)
            .cloned()
            .collect()
    }
}

type TreePoint = ProductPoint<StarPoint, StarPoint>;

/// Point `((left_leg, 1/2 + s), (right_leg, 1/2 - s))` of a tripod segment.
pub fn tripod_segment_point(left_leg: usize, right_leg: usize, s: f64) -> TreePoint {
    ProductPoint::new(
        StarPoint::new(left_leg, 0.5 + s),
        StarPoint::new(right_leg, 0.5 - s),
    )
}

/// Unit segment of slope -1 in the square spanned by `left_leg x right_leg`,
/// from parameter `s = +delta` to `s = -delta`.
pub fn tripod_segment(left_leg: usize, right_leg: usize) -> ConvexSet<TreePoint> {
    ConvexSet::Segment {
        start: tripod_segment_point(left_leg, right_leg, TRIPOD_HALF_WIDTH),
        end: tripod_segment_point(left_leg, right_leg, -TRIPOD_HALF_WIDTH),
    }
}

/// `k >= 3` segments in the product of two unit tripods; sets `4..=k` repeat `C_3`.
pub fn build_tripod_counterexample(k: usize) -> Result<Scenario<TripodProduct>> {
    if k < 3 {
        return Err(ScenarioError::InvalidParameter(format!(
            "tripod counterexample needs k >= 3, got {k}"
        )));
    }
    let mut sets: Vec<_> = (0..3).map(|leg| tripod_segment(leg, leg)).collect();
    while sets.len() < k {
        sets.push(tripod_segment(2, 2));
    }
    let endpoint = tripod_segment_point(0, 0, TRIPOD_HALF_WIDTH);
    let center = ProductPoint::new(StarPoint::center(), StarPoint::center());
    Ok(Scenario {
        name: "tripod".into(),
        space: TripodProduct::unit_tripods(),
        sets,
        starts: vec![
            Start {
                label: "endpoint".into(),
                point: endpoint,
                expected: Expected::NotRegular { bound: 1.0 },
            },
            Start {
                label: "midpoint".into(),
                point: tripod_segment_point(0, 0, 0.0),
                expected: Expected::Fixed,
            },
            Start {
                label: "center".into(),
                point: center,
                expected: Expected::Fixed,
            },
        ],
        expected: Expected::NotRegular { bound: 1.0 },
        note: "cyclic product swaps the endpoints of C1; every step from an endpoint has length 1"
            .into(),
    })
}

/// The x-axis and `{x > 0, y >= 1 + x^(-epsilon)}`.
pub fn build_plane_two_sets(epsilon: f64) -> Result<Scenario<Plane>> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(ScenarioError::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let predicted_slope = -(1.0 + epsilon) / (2.0 + epsilon);
    Ok(Scenario {
        name: "plane-two-sets".into(),
        space: Plane,
        sets: vec![ConvexSet::AxisLine, ConvexSet::Epigraph { epsilon }],
        starts: vec![Start {
            label: "default".into(),
            point: PlanePoint::new(1.0, 0.0),
            expected: Expected::RegularWithRate { predicted_slope },
        }],
        expected: Expected::RegularWithRate { predicted_slope },
        note: "disjoint sets at gap 1, approached only at infinity; steps are o(n^-1/2) but not O(n^(-1/2-epsilon))".into(),
    })
}

/// Three discs at heights `0, L/3, 2L/3` of a solid torus of core length `L`
/// twisted by `alpha`.
///
/// With `C_i` the disc at height `(i - 1) L / 3`, projecting from `C_1` onto
/// `C_3` is the only step that crosses the gluing, so `P = P_1 P_2 P_3`
/// restricted to `C_1` is the rotation by `alpha`.
pub fn build_twisted_chain(
    alpha: f64,
    radius: f64,
    circumference: f64,
) -> Result<Scenario<TwistedChain>> {
    let chain = TwistedChain::new(radius, circumference, alpha)?;
    let bound = 2.0 * radius * (0.5 * alpha).sin().abs();
    let expected = if bound > 0.0 {
        Expected::NotRegular { bound }
    } else {
        Expected::Fixed
    };
    Ok(Scenario {
        name: "twisted-chain".into(),
        space: chain,
        sets: (0..3).map(|disc_index| ConvexSet::CrossDisc { disc_index }).collect(),
        starts: vec![
            Start {
                label: "boundary".into(),
                point: ChainPoint::new(radius, 0.0, 0.0),
                expected: expected.clone(),
            },
            Start {
                label: "axis".into(),
                point: ChainPoint::new(0.0, 0.0, 0.0),
                expected: Expected::Fixed,
            },
        ],
        expected,
        note: "cyclic product rotates the first disc by the twist angle; for irrational alpha/pi no power is asymptotically regular".into(),
    })
}

/// The x-axis and the line through the origin at angle `theta`.
pub fn build_plane_two_lines(theta: f64) -> Result<Scenario<Plane>> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(ScenarioError::InvalidParameter(format!(
            "theta must lie in (0, pi/2), got {theta}"
        )));
    }
    Ok(Scenario {
        name: "plane-two-lines".into(),
        space: Plane,
        sets: vec![ConvexSet::AxisLine, ConvexSet::Line { angle: theta }],
        starts: vec![
            Start {
                label: "default".into(),
                point: PlanePoint::new(1.0, 0.0),
                expected: Expected::Regular,
            },
            Start {
                label: "origin".into(),
                point: PlanePoint::new(0.0, 0.0),
                expected: Expected::Fixed,
            },
        ],
        expected: Expected::Regular,
        note: "lines meet at the origin; steps shrink by cos^2(theta) per cycle".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{segment_pair_distance, ProjectionOptions, ProjectionSpace};
    use crate::engine::{cycle_apply, iterate};
    use crate::metric::GeodesicSpace;

    fn segment_ends(set: &ConvexSet<TreePoint>) -> (&TreePoint, &TreePoint) {
        match set {
            ConvexSet::Segment { start, end } => (start, end),
            _ => unreachable!(),
        }
    }

    #[test]
    fn tripod_segments_have_unit_length_and_gap_root_two() {
        let sc = build_tripod_counterexample(3).unwrap();
        for set in &sc.sets {
            let (s, e) = segment_ends(set);
            assert!((sc.space.distance(s, e).unwrap() - 1.0).abs() < 1e-15);
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                let d = segment_pair_distance(
                    &sc.space,
                    segment_ends(&sc.sets[i]),
                    segment_ends(&sc.sets[j]),
                )
                .unwrap();
                assert!((d - SQRT_2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tripod_extension_repeats_third_set() {
        let sc = build_tripod_counterexample(5).unwrap();
        assert_eq!(sc.set_count(), 5);
        assert_eq!(sc.sets[2], sc.sets[3]);
        assert_eq!(sc.sets[3], sc.sets[4]);
        assert!(build_tripod_counterexample(2).is_err());
    }

    #[test]
    fn tripod_cycle_from_endpoint() {
        let sc = build_tripod_counterexample(3).unwrap();
        let e = &sc.start("endpoint").unwrap().point;
        let (p, visited) = cycle_apply(&sc.space, &sc.sets, e, &Default::default()).unwrap();
        let d = TRIPOD_HALF_WIDTH;
        let expect = [
            tripod_segment_point(2, 2, -d),
            tripod_segment_point(1, 1, d),
            tripod_segment_point(0, 0, -d),
        ];
        for (got, want) in visited.iter().zip(&expect) {
            assert!(sc.space.distance(got, want).unwrap() < 1e-15);
        }
        assert!((sc.space.distance(e, &p).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tripod_midpoint_is_fixed() {
        let sc = build_tripod_counterexample(3).unwrap();
        let m = &sc.start("midpoint").unwrap().point;
        let (p, _) = cycle_apply(&sc.space, &sc.sets, m, &Default::default()).unwrap();
        assert!(sc.space.distance(m, &p).unwrap() < 1e-15);
    }

    #[test]
    fn tripod_from_center_settles_after_one_cycle() {
        let sc = build_tripod_counterexample(3).unwrap();
        let c = &sc.start("center").unwrap().point;
        let trace = iterate(&sc.space, &sc.sets, c, 10, &Default::default()).unwrap();
        assert!((trace.r(0).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(trace.steps[1..].iter().all(|r| *r < 1e-15));
    }

    #[test]
    fn plane_two_sets_builder() {
        let sc = build_plane_two_sets(0.5).unwrap();
        assert_eq!(sc.sets[1], ConvexSet::Epigraph { epsilon: 0.5 });
        assert!(build_plane_two_sets(0.0).is_err());
        assert!(build_plane_two_sets(-1.0).is_err());

        let x0 = sc.default_start().point;
        let (x1, _) = cycle_apply(&sc.space, &sc.sets, &x0, &Default::default()).unwrap();
        assert!(x1.x > x0.x);
        assert_eq!(x1.y, 0.0);
    }

    #[test]
    fn chain_cycle_rotates_first_disc() {
        let sc = build_twisted_chain(1.0, 0.1, 3.0).unwrap();
        let x = sc.start("boundary").unwrap().point;
        let (p, _) = cycle_apply(&sc.space, &sc.sets, &x, &Default::default()).unwrap();
        assert!((p.disc[0] - 0.1 * 1f64.cos()).abs() < 1e-15);
        assert!((p.disc[1] - 0.1 * 1f64.sin()).abs() < 1e-15);
        let step = sc.space.distance(&x, &p).unwrap();
        assert!((step - 0.2 * 0.5f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn untwisted_chain_is_identity_on_first_disc() {
        let sc = build_twisted_chain(0.0, 0.1, 3.0).unwrap();
        let x = ChainPoint::new(0.03, -0.05, 0.0);
        let (p, _) = cycle_apply(&sc.space, &sc.sets, &x, &Default::default()).unwrap();
        assert_eq!(p, x);
        assert_eq!(sc.expected, Expected::Fixed);
    }

    #[test]
    fn quarter_twist_has_period_four() {
        let sc = build_twisted_chain(FRAC_PI_2, 0.1, 3.0).unwrap();
        let x = sc.default_start().point;
        let (p4, _) = cycle_apply(&sc.space, &sc.power_sets(4), &x, &Default::default()).unwrap();
        assert!(sc.space.distance(&x, &p4).unwrap() < 1e-15);
        let (p1, _) = cycle_apply(&sc.space, &sc.sets, &x, &Default::default()).unwrap();
        assert!((sc.space.distance(&x, &p1).unwrap() - 0.1 * SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn two_lines_builder() {
        assert!(build_plane_two_lines(FRAC_PI_2).is_err());
        assert!(build_plane_two_lines(0.0).is_err());
        let sc = build_plane_two_lines(std::f64::consts::FRAC_PI_4).unwrap();
        let origin = sc.start("origin").unwrap().point;
        let trace = iterate(&sc.space, &sc.sets, &origin, 5, &Default::default()).unwrap();
        assert!(trace.steps.iter().all(|r| *r == 0.0));
    }

    #[test]
    fn tripod_projections_land_on_target_segment() {
        let sc = build_tripod_counterexample(3).unwrap();
        let opts = ProjectionOptions::default();
        let (s, e) = segment_ends(&sc.sets[1]);
        let x = sc.space.geodesic(s, e, 0.37).unwrap();
        let p = sc.space.project(&sc.sets[0], &x, &opts).unwrap().point;
        assert!(sc.space.set_gap(&sc.sets[0], &p, &opts).unwrap() < 1e-15);
    }
}
