use super::{check_tol, ProjectionError, ProjectionResult, Result, Solver};
use crate::metric::PlanePoint;

const MAX_DOUBLINGS: usize = 200;
const MAX_NEWTON_STEPS: usize = 200;

fn result(x: &PlanePoint, point: PlanePoint, solver: Solver) -> ProjectionResult<PlanePoint> {
    ProjectionResult {
        distance: (x.x - point.x).hypot(x.y - point.y),
        point,
        solver,
    }
}

pub fn project_axis(x: &PlanePoint) -> ProjectionResult<PlanePoint> {
    ProjectionResult {
        point: PlanePoint::new(x.x, 0.0),
        distance: x.y.abs(),
        solver: Solver::ClosedForm,
    }
}

/// Projection onto the line through the origin with direction `(cos angle, sin angle)`.
pub fn project_line(angle: f64, x: &PlanePoint) -> ProjectionResult<PlanePoint> {
    let (s, c) = angle.sin_cos();
    let along = x.x * c + x.y * s;
    result(x, PlanePoint::new(along * c, along * s), Solver::ClosedForm)
}

/// Clamped foot of the perpendicular onto `[start, end]`.
pub fn project_segment_plane(
    start: &PlanePoint,
    end: &PlanePoint,
    x: &PlanePoint,
) -> Result<ProjectionResult<PlanePoint>> {
    let (dx, dy) = (end.x - start.x, end.y - start.y);
    let len_sq = dx * dx + dy * dy;
    let t = if len_sq > 0.0 {
        (((x.x - start.x) * dx + (x.y - start.y) * dy) / len_sq).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let point = if t == 1.0 {
        *end
    } else {
        PlanePoint::new(start.x + t * dx, start.y + t * dy)
    };
    Ok(result(x, point, Solver::ClosedForm))
}

/// Boundary curve `u -> 1 + u^(-epsilon)` of the epigraph.
fn boundary(epsilon: f64, u: f64) -> f64 {
    1.0 + u.powf(-epsilon)
}

/// Projection onto `{(x, y) : x > 0, y >= 1 + x^(-epsilon)}`.
///
/// Outside points land on the boundary at the unique root of
/// `g(u) = (u - x) - epsilon u^(-epsilon-1) (1 + u^(-epsilon) - y)`.
/// The root is bracketed by doubling or halving `u` from 1 and then refined by
/// Newton steps in `log u`, falling back to bisection when a step leaves the
/// bracket.
pub fn project_epigraph(
    epsilon: f64,
    x: &PlanePoint,
    tol: f64,
) -> Result<ProjectionResult<PlanePoint>> {
    check_tol(tol)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(ProjectionError::InvalidEpsilon(epsilon));
    }
    if x.x > 0.0 && x.y >= boundary(epsilon, x.x) {
        return Ok(result(x, *x, Solver::ClosedForm));
    }
    let failure = |reason: String| ProjectionError::NumericalFailure {
        x: x.x,
        y: x.y,
        epsilon,
        reason,
    };

    // g and its derivative with respect to s = ln u
    let eval = |s: f64| {
        let u = s.exp();
        let pow = u.powf(-epsilon);
        let slack = 1.0 + pow - x.y;
        let g = (u - x.x) - epsilon * pow / u * slack;
        let dg_du = 1.0
            + epsilon * (epsilon + 1.0) * pow / (u * u) * slack
            + epsilon * epsilon * pow * pow / (u * u);
        (g, dg_du * u)
    };

    let ln2 = std::f64::consts::LN_2;
    let (mut lo, mut hi) = (0.0_f64, 0.0_f64);
    let (g1, _) = eval(0.0);
    if g1 < 0.0 {
        let mut found = false;
        for _ in 0..MAX_DOUBLINGS {
            hi += ln2;
            if eval(hi).0 >= 0.0 {
                found = true;
                break;
            }
            lo = hi;
        }
        if !found {
            return Err(failure(format!(
                "no sign change after {MAX_DOUBLINGS} doublings"
            )));
        }
    } else if g1 > 0.0 {
        let mut found = false;
        for _ in 0..MAX_DOUBLINGS {
            lo -= ln2;
            if eval(lo).0 <= 0.0 {
                found = true;
                break;
            }
            hi = lo;
        }
        if !found {
            return Err(failure(format!(
                "no sign change after {MAX_DOUBLINGS} halvings"
            )));
        }
    }

    let scale = 1.0 + x.x.abs() + x.y.abs();
    let mut s = 0.5 * (lo + hi);
    let mut converged = false;
    for _ in 0..MAX_NEWTON_STEPS {
        let (g, dg) = eval(s);
        if !g.is_finite() {
            return Err(failure(format!("non-finite residual at u = {}", s.exp())));
        }
        if g == 0.0 {
            converged = true;
            break;
        }
        if g < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let newton = s - g / dg;
        let next = if dg > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if g.abs() <= tol * scale {
            // one polishing step brings the root to working precision
            if eval(next).0.abs() <= g.abs() {
                s = next;
            }
            converged = true;
            break;
        }
        if next == s || hi - lo <= 4.0 * f64::EPSILON * s.abs().max(1.0) {
            s = next;
            converged = true;
            break;
        }
        s = next;
    }
    if !converged {
        return Err(failure(format!(
            "no convergence in {MAX_NEWTON_STEPS} steps"
        )));
    }
    let u = s.exp();
    Ok(result(
        x,
        PlanePoint::new(u, boundary(epsilon, u)),
        Solver::Newton,
    ))
}

/// First-order residual used by the projector; exposed for tests.
#[cfg(test)]
pub(crate) fn epigraph_residual(epsilon: f64, x: &PlanePoint, u: f64) -> f64 {
    (u - x.x) - epsilon * u.powf(-epsilon - 1.0) * (1.0 + u.powf(-epsilon) - x.y)
}
