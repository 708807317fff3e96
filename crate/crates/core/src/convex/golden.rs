use super::{check_tol, ProjectionResult, Result, Solver};
use crate::metric::GeodesicSpace;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Number of golden-section steps needed to shrink a unit bracket below `tol`.
pub fn golden_iterations(tol: f64) -> usize {
    ((1.0 / tol).ln() / (1.0 / INV_PHI).ln()).ceil().max(1.0) as usize
}

/// Minimizes a unimodal `f` on `[lo, hi]` with a fixed number of steps.
///
/// The endpoints are compared against the interior estimate, so a minimum
/// sitting on the boundary is returned exactly. Returns `(argmin, min)`.
pub fn golden_section_minimize<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let steps = golden_iterations(tol / (hi - lo).abs().max(f64::MIN_POSITIVE));
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..steps {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    [(mid, f(mid)), (c, fc), (d, fd), (lo, f(lo)), (hi, f(hi))]
        .into_iter()
        .fold((mid, f64::INFINITY), |best, cand| {
            if cand.1 < best.1 {
                cand
            } else {
                best
            }
        })
}

/// Projects `x` onto the geodesic segment `[start, end]` by minimizing
/// `t -> d(x, gamma(t))^2` over `[0, 1]`.
///
/// The objective is convex along geodesics of a CAT(0) space, so golden-section
/// search applies.
pub fn project_segment_generic<S: GeodesicSpace>(
    space: &S,
    start: &S::Point,
    end: &S::Point,
    x: &S::Point,
    tol: f64,
) -> Result<ProjectionResult<S::Point>> {
    check_tol(tol)?;
    space.validate(x)?;
    space.validate(start)?;
    space.validate(end)?;
    let objective = |t: f64| {
        space
            .geodesic(start, end, t)
            .and_then(|p| space.distance(x, &p))
            .map(|d| d * d)
            .unwrap_or(f64::INFINITY)
    };
    let (t, _) = golden_section_minimize(objective, 0.0, 1.0, tol);
    let point = space.geodesic(start, end, t)?;
    let distance = space.distance(x, &point)?;
    Ok(ProjectionResult {
        point,
        distance,
        solver: Solver::GoldenSection,
    })
}
