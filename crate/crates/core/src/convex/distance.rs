use super::tree::segment_legs;
use super::{
    golden_section_minimize, ConvexSet, ProjectionError, ProjectionOptions, ProjectionSpace, Result,
};
use crate::metric::{GeodesicSpace, MetricSpace, ProductPoint, StarPoint, TripodProduct};

/// How to sample the first set in [`set_distance`].
#[derive(Debug, Clone, PartialEq)]
pub enum Sampler<P> {
    /// Uniform parameter grid on a segment, refined by golden-section search
    /// around the best grid point.
    SegmentGrid { samples: usize },
    /// Explicit points of the first set.
    Points(Vec<P>),
}

/// Estimate of `inf { d(a, b) : a in A, b in B }` from sampled points of `A`
/// and exact projections onto `B`.
///
/// The estimate is never below the true gap: every candidate is a realized
/// distance between a point of `A` and a point of `B`.
pub fn set_distance<S>(
    space: &S,
    a: &ConvexSet<S::Point>,
    b: &ConvexSet<S::Point>,
    sampler: &Sampler<S::Point>,
    opts: &ProjectionOptions,
) -> Result<f64>
where
    S: ProjectionSpace + GeodesicSpace,
{
    if a == b {
        return Ok(0.0);
    }
    match sampler {
        Sampler::Points(points) => points
            .iter()
            .map(|p| space.set_gap(b, p, opts))
            .try_fold(f64::INFINITY, |acc, d| d.map(|d| acc.min(d))),
        Sampler::SegmentGrid { samples } => {
            let ConvexSet::Segment { start, end } = a else {
                return Err(ProjectionError::UnsupportedSet { set: a.kind() });
            };
            let n = (*samples).max(2);
            let gap_at = |t: f64| -> Result<f64> {
                let p = space.geodesic(start, end, t)?;
                space.set_gap(b, &p, opts)
            };
            let mut best = (0usize, f64::INFINITY);
            for i in 0..=n {
                let d = gap_at(i as f64 / n as f64)?;
                if d < best.1 {
                    best = (i, d);
                }
            }
            // t -> dist(gamma(t), B) is convex, so the minimizer is within one grid cell
            let lo = best.0.saturating_sub(1) as f64 / n as f64;
            let hi = (best.0 + 1).min(n) as f64 / n as f64;
            let (_, refined) =
                golden_section_minimize(|t| gap_at(t).unwrap_or(f64::INFINITY), lo, hi, opts.tol);
            Ok(best.1.min(refined))
        }
    }
}

type TreePoint = ProductPoint<StarPoint, StarPoint>;

/// Exact distance between two segments of a product of star trees, each
/// factor confined to one leg.
///
/// The squared distance between `gamma_a(t)` and `gamma_b(s)` is a convex
/// quadratic on the unit square; its minimum is either the interior critical
/// point or lies on one of the four edges.
pub fn segment_pair_distance(
    space: &TripodProduct,
    a: (&TreePoint, &TreePoint),
    b: (&TreePoint, &TreePoint),
) -> Result<f64> {
    for p in [a.0, a.1, b.0, b.1] {
        space.validate(p)?;
    }
    let (al, ar) = segment_legs(a.0, a.1)?;
    let (bl, br) = segment_legs(b.0, b.1)?;
    // each factor contributes (c + alpha t + beta s)^2
    let factor =
        |pa: (&StarPoint, &StarPoint), la: usize, pb: (&StarPoint, &StarPoint), lb: usize| {
            let alpha = pa.1.offset() - pa.0.offset();
            let beta = pb.1.offset() - pb.0.offset();
            let constant_a = pa.0.is_center() && pa.1.is_center();
            let constant_b = pb.0.is_center() && pb.1.is_center();
            if la == lb || constant_a || constant_b {
                [pa.0.offset() - pb.0.offset(), alpha, -beta]
            } else {
                [pa.0.offset() + pb.0.offset(), alpha, beta]
            }
        };
    let terms = [
        factor((&a.0.left, &a.1.left), al, (&b.0.left, &b.1.left), bl),
        factor((&a.0.right, &a.1.right), ar, (&b.0.right, &b.1.right), br),
    ];
    let value = |t: f64, s: f64| -> f64 {
        terms
            .iter()
            .map(|[c, p, q]| (c + p * t + q * s).powi(2))
            .sum()
    };
    // Hessian / 2 and gradient / 2 at the origin
    let (mut htt, mut hts, mut hss, mut gt, mut gs) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for [c, p, q] in terms {
        htt += p * p;
        hts += p * q;
        hss += q * q;
        gt += c * p;
        gs += c * q;
    }
    let clamp_vertex = |quad: f64, lin: f64| {
        if quad > 0.0 {
            (-lin / quad).clamp(0.0, 1.0)
        } else {
            0.0
        }
    };
    let mut candidates = Vec::with_capacity(5);
    let det = htt * hss - hts * hts;
    if det > 1e-14 * (htt * hss).max(f64::MIN_POSITIVE) {
        let t = (-gt * hss + gs * hts) / det;
        let s = (-gs * htt + gt * hts) / det;
        if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&s) {
            candidates.push((t, s));
        }
    }
    for edge in [0.0, 1.0] {
        // s fixed
        candidates.push((clamp_vertex(htt, gt + hts * edge), edge));
        // t fixed
        candidates.push((edge, clamp_vertex(hss, gs + hts * edge)));
    }
    let best = candidates
        .into_iter()
        .map(|(t, s)| value(t, s))
        .fold(f64::INFINITY, f64::min);
    Ok(best.max(0.0).sqrt())
}
