use super::{ProjectionError, ProjectionResult, Result, Solver};
use crate::metric::{rotate, ChainPoint, MetricSpace, TwistedChain};

/// Two lift gaps closer than this are treated as a tie.
const TIE_TOL: f64 = 1e-12;

/// Projection onto cross-sectional disc `disc_index` of a solid-torus chain.
///
/// The nearest lift of the disc is the one minimizing the vertical gap; moving
/// straight onto it and reading the result back in the disc's own chart
/// rotates the disc coordinates by `-k * twist`, where `k` counts the wraps.
pub fn project_cross_disc(
    chain: &TwistedChain,
    disc_index: usize,
    x: &ChainPoint,
) -> Result<ProjectionResult<ChainPoint>> {
    chain.validate(x)?;
    let target = *chain
        .disc_heights()
        .get(disc_index)
        .ok_or(ProjectionError::InvalidDisc(disc_index))?;
    let loop_len = chain.circumference();
    let gap = x.height - target;
    let nearest = (gap / loop_len).round() as i64;
    let vertical = |k: i64| (gap - k as f64 * loop_len).abs();
    let best = vertical(nearest);
    for other in [nearest - 1, nearest + 1] {
        if (vertical(other) - best).abs() < TIE_TOL {
            let (first, second) = (nearest.min(other), nearest.max(other));
            return Err(ProjectionError::AmbiguousProjection { first, second });
        }
    }
    let point = ChainPoint {
        disc: rotate(x.disc, -(nearest as f64) * chain.twist()),
        height: target,
    };
    Ok(ProjectionResult {
        point,
        distance: best,
        solver: Solver::ClosedForm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(chain: &TwistedChain, disc_index: usize, x: &ChainPoint) -> (ChainPoint, f64) {
        let h = chain.disc_heights()[disc_index];
        (-3..=3)
            .map(|k: i64| {
                let kf = k as f64;
                let d = (x.height - h - kf * chain.circumference()).abs();
                let p = ChainPoint {
                    disc: rotate(x.disc, -kf * chain.twist()),
                    height: h,
                };
                (p, d)
            })
            .fold((*x, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b })
    }

    #[test]
    fn point_on_disc_is_fixed() {
        let chain = TwistedChain::new(0.1, 3.0, 1.0).unwrap();
        let x = ChainPoint::new(0.03, 0.04, 1.0);
        let r = project_cross_disc(&chain, 1, &x).unwrap();
        assert_eq!(r.point, x);
        assert_eq!(r.distance, 0.0);
    }

    #[test]
    fn straight_drop_without_wrap() {
        let chain = TwistedChain::with_heights(0.1, 3.0, 1.0, [0.0, 1.0, 2.0]).unwrap();
        let x = ChainPoint::new(0.05, 0.0, 1.0);
        let r = project_cross_disc(&chain, 0, &x).unwrap();
        assert_eq!(r.point, ChainPoint::new(0.05, 0.0, 0.0));
        assert_eq!(r.distance, 1.0);
        let (p, d) = brute_force(&chain, 0, &x);
        assert_eq!((r.point, r.distance), (p, d));
    }

    #[test]
    fn wrapped_drop_rotates_by_twist() {
        let chain = TwistedChain::with_heights(0.1, 3.0, 1.0, [0.0, 1.0, 2.0]).unwrap();
        let x = ChainPoint::new(0.05, 0.0, 0.0);
        let r = project_cross_disc(&chain, 2, &x).unwrap();
        assert!((r.point.disc[0] - 0.05 * 1f64.cos()).abs() < 1e-15);
        assert!((r.point.disc[1] - 0.05 * 1f64.sin()).abs() < 1e-15);
        assert_eq!(r.point.height, 2.0);
        assert!((r.distance - 1.0).abs() < 1e-15);
        let (p, d) = brute_force(&chain, 2, &x);
        assert_eq!((r.point, r.distance), (p, d));
    }

    #[test]
    fn reported_distance_matches_chain_metric() {
        let chain = TwistedChain::new(0.1, 3.0, 1.0).unwrap();
        let x = ChainPoint::new(-0.02, 0.07, 2.9);
        for disc in 0..3 {
            let r = project_cross_disc(&chain, disc, &x).unwrap();
            assert!((chain.distance(&x, &r.point).unwrap() - r.distance).abs() < 1e-12);
        }
    }

    #[test]
    fn halfway_point_is_ambiguous() {
        let chain = TwistedChain::new(0.1, 3.0, 1.0).unwrap();
        let x = ChainPoint::new(0.0, 0.0, 1.5);
        assert!(matches!(
            project_cross_disc(&chain, 0, &x),
            Err(ProjectionError::AmbiguousProjection {
                first: 0,
                second: 1
            })
        ));
        assert!(matches!(
            project_cross_disc(&chain, 5, &x),
            Err(ProjectionError::InvalidDisc(5))
        ));
    }
}
