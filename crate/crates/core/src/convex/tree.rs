use super::{ProjectionError, ProjectionResult, Result, Solver};
use crate::metric::{GeodesicSpace, MetricSpace, ProductPoint, StarPoint, TripodProduct};

/// Leg shared by both endpoints of a tree segment, if any.
fn common_leg(a: &StarPoint, b: &StarPoint) -> Option<usize> {
    match (a.is_center(), b.is_center()) {
        (true, true) => Some(0),
        (true, false) => Some(b.leg()),
        (false, true) => Some(a.leg()),
        (false, false) => (a.leg() == b.leg()).then_some(a.leg()),
    }
}

/// Coefficients `(c0, c1)` with `d_factor(x, gamma(t)) = |c0 + c1 t|` for a
/// segment factor confined to one leg.
pub(crate) fn factor_affine(a: &StarPoint, b: &StarPoint, x: &StarPoint, leg: usize) -> (f64, f64) {
    let slope = b.offset() - a.offset();
    if x.on_leg(leg) {
        (a.offset() - x.offset(), slope)
    } else {
        (a.offset() + x.offset(), slope)
    }
}

/// Confinement check shared by the exact projector and the segment-pair distance.
pub(crate) fn segment_legs(
    start: &ProductPoint<StarPoint, StarPoint>,
    end: &ProductPoint<StarPoint, StarPoint>,
) -> Result<(usize, usize)> {
    let left = common_leg(&start.left, &end.left);
    let right = common_leg(&start.right, &end.right);
    match (left, right) {
        (Some(l), Some(r)) => Ok((l, r)),
        _ => Err(ProjectionError::UnsupportedShape(
            "a factor of the segment passes through the tree center".into(),
        )),
    }
}

/// Exact projection onto a segment of a product of star trees whose factors
/// each stay on a single leg.
///
/// Each factor distance along the segment is `|c0 + c1 t|` (same leg as `x`)
/// or `c0 + c1 t` (different leg), so the squared product distance is one
/// quadratic in `t`; its clamped vertex is the projection.
pub fn project_segment_tree_exact(
    space: &TripodProduct,
    start: &ProductPoint<StarPoint, StarPoint>,
    end: &ProductPoint<StarPoint, StarPoint>,
    x: &ProductPoint<StarPoint, StarPoint>,
) -> Result<ProjectionResult<ProductPoint<StarPoint, StarPoint>>> {
    space.validate(x)?;
    space.validate(start)?;
    space.validate(end)?;
    let (left_leg, right_leg) = segment_legs(start, end)?;
    let (l0, l1) = factor_affine(&start.left, &end.left, &x.left, left_leg);
    let (r0, r1) = factor_affine(&start.right, &end.right, &x.right, right_leg);
    let quad = l1 * l1 + r1 * r1;
    let lin = l0 * l1 + r0 * r1;
    let t = if quad > 0.0 {
        (-lin / quad).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let point = space.geodesic(start, end, t)?;
    let distance = space.distance(x, &point)?;
    Ok(ProjectionResult {
        point,
        distance,
        solver: Solver::ExactPiecewise,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::project_segment_generic;

    const DELTA: f64 = std::f64::consts::SQRT_2 / 4.0;

    fn pt(l: usize, lo: f64, r: usize, ro: f64) -> ProductPoint<StarPoint, StarPoint> {
        ProductPoint::new(StarPoint::new(l, lo), StarPoint::new(r, ro))
    }

    fn c1() -> (
        ProductPoint<StarPoint, StarPoint>,
        ProductPoint<StarPoint, StarPoint>,
    ) {
        (
            pt(0, 0.5 + DELTA, 0, 0.5 - DELTA),
            pt(0, 0.5 - DELTA, 0, 0.5 + DELTA),
        )
    }

    #[test]
    fn endpoint_of_second_segment_maps_to_far_endpoint() {
        let space = TripodProduct::unit_tripods();
        let (s, e) = c1();
        let x = pt(1, 0.5 + DELTA, 1, 0.5 - DELTA);
        let r = project_segment_tree_exact(&space, &s, &e, &x).unwrap();
        assert!(space.distance(&r.point, &e).unwrap() < 1e-15);
        assert_eq!(r.solver, Solver::ExactPiecewise);

        let generic = project_segment_generic(&space, &s, &e, &x, 1e-12).unwrap();
        assert!(space.distance(&generic.point, &r.point).unwrap() < 1e-7);
    }

    #[test]
    fn midpoint_maps_to_midpoint() {
        let space = TripodProduct::unit_tripods();
        let (s, e) = c1();
        let r = project_segment_tree_exact(&space, &s, &e, &pt(1, 0.5, 1, 0.5)).unwrap();
        assert!(space.distance(&r.point, &pt(0, 0.5, 0, 0.5)).unwrap() < 1e-15);
    }

    #[test]
    fn point_on_segment_is_fixed() {
        let space = TripodProduct::unit_tripods();
        let (s, e) = c1();
        let x = space.geodesic(&s, &e, 0.3).unwrap();
        let r = project_segment_tree_exact(&space, &s, &e, &x).unwrap();
        assert!(r.distance < 1e-15);
    }

    #[test]
    fn segment_through_center_is_unsupported() {
        let space = TripodProduct::unit_tripods();
        let s = pt(0, 0.5, 0, 0.5);
        let e = pt(1, 0.5, 0, 0.7);
        let x = pt(2, 0.3, 2, 0.3);
        assert!(matches!(
            project_segment_tree_exact(&space, &s, &e, &x),
            Err(ProjectionError::UnsupportedShape(_))
        ));
        assert!(project_segment_generic(&space, &s, &e, &x, 1e-12).is_ok());
    }

    #[test]
    fn segment_touching_center_is_supported() {
        let space = TripodProduct::unit_tripods();
        let s = pt(0, 0.0, 1, 0.2);
        let e = pt(2, 0.8, 1, 0.9);
        let x = pt(2, 0.4, 0, 0.3);
        let exact = project_segment_tree_exact(&space, &s, &e, &x).unwrap();
        let generic = project_segment_generic(&space, &s, &e, &x, 1e-12).unwrap();
        assert!(space.distance(&exact.point, &generic.point).unwrap() < 1e-7);
    }
}
