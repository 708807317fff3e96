//! Invariant suites behind `hproj verify`.

use std::f64::consts::{FRAC_PI_2, TAU};

use hadamard_proj::convex::{ConvexSet, ProjectionOptions};
use hadamard_proj::engine::{
    cycle_apply, iterate, two_set_diagnostics, verdict, IterateOptions, DEFAULT_R_TOL,
    DEFAULT_TAIL_FRACTION,
};
use hadamard_proj::metric::{
    cn_check, comparison_angle, ChainPoint, Plane, PlanePoint, ProductPoint, StarPoint, StarTree,
    TripodProduct, TwistedChain,
};
use hadamard_proj::scenarios::{
    build_plane_two_sets, build_tripod_counterexample, build_twisted_chain, tripod_segment_point,
    TRIPOD_HALF_WIDTH,
};
use hadamard_proj::{Classification, GeodesicSpace, MetricSpace, ProjectionSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::Suite;
use crate::error::{CliError, Result};

type TreePoint = ProductPoint<StarPoint, StarPoint>;

/// Worst observed value of one invariant against its limit.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    /// Larger is worse; passes when `worst <= limit`.
    pub worst: f64,
    pub limit: f64,
    pub seed: u64,
    /// Index of the sample that produced `worst`, when sampled.
    pub sample: Option<usize>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.worst <= self.limit
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{status} {:<36} worst={:.3e} limit={:.1e} seed={}",
            self.name, self.worst, self.limit, self.seed
        );
        if let (false, Some(i)) = (self.passed(), self.sample) {
            s.push_str(&format!(" sample={i}"));
        }
        s
    }
}

/// Tracks the worst value and where it occurred.
struct Worst {
    value: f64,
    at: Option<usize>,
}

impl Worst {
    fn new() -> Self {
        Worst {
            value: f64::NEG_INFINITY,
            at: None,
        }
    }

    fn note(&mut self, v: f64, i: usize) {
        // NaN counts as a failure
        if v > self.value || v.is_nan() {
            self.value = if v.is_nan() { f64::INFINITY } else { v };
            self.at = Some(i);
        }
    }

    fn check(self, name: &str, limit: f64, seed: u64) -> Check {
        Check {
            name: name.to_string(),
            worst: self.value.max(0.0),
            limit,
            seed,
            sample: self.at,
        }
    }
}

/// Each check draws from its own stream so results do not depend on which
/// other checks ran.
fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn star(rng: &mut impl Rng) -> StarPoint {
    StarPoint::new(rng.gen_range(0..3), rng.gen_range(0.0..=1.0))
}

fn tree(rng: &mut impl Rng) -> TreePoint {
    ProductPoint::new(star(rng), star(rng))
}

fn plane(rng: &mut impl Rng) -> PlanePoint {
    PlanePoint::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))
}

fn chain_point(rng: &mut impl Rng, chain: &TwistedChain) -> ChainPoint {
    let rho = chain.radius() * rng.gen_range(0.0f64..1.0).sqrt();
    let phi = rng.gen_range(0.0..TAU);
    ChainPoint::new(
        rho * phi.cos(),
        rho * phi.sin(),
        rng.gen_range(0.0..chain.circumference()),
    )
}

fn standard_chain() -> TwistedChain {
    TwistedChain::new(0.1, 3.0, 1.0).expect("valid chain")
}

pub fn metric_suite(seed: u64, samples: usize) -> Result<Vec<Check>> {
    let product = TripodProduct::unit_tripods();
    let tree_space = StarTree::tripod();
    let chain = standard_chain();
    let mut out = Vec::new();

    // CN margins are reported negated so that larger is worse
    let mut rng = rng_for(seed, 1);
    let mut w = Worst::new();
    for i in 0..samples {
        let (x, y, z) = (tree(&mut rng), tree(&mut rng), tree(&mut rng));
        w.note(-cn_check(&product, &x, &y, &z)?, i);
    }
    out.push(w.check("metric/cn-tripod-product", 1e-12, seed));

    let mut rng = rng_for(seed, 2);
    let mut w = Worst::new();
    for i in 0..samples {
        let (x, y, z) = (plane(&mut rng), plane(&mut rng), plane(&mut rng));
        w.note(-cn_check(&Plane, &x, &y, &z)?, i);
    }
    out.push(w.check("metric/cn-plane", 1e-12, seed));

    fn speed<S: GeodesicSpace>(s: &S, p: &S::Point, q: &S::Point, t1: f64, t2: f64) -> Result<f64> {
        let a = s.geodesic(p, q, t1)?;
        let b = s.geodesic(p, q, t2)?;
        Ok((s.distance(&a, &b)? - (t1 - t2).abs() * s.distance(p, q)?).abs())
    }
    let mut rng = rng_for(seed, 3);
    let mut w = Worst::new();
    for i in 0..samples {
        let (t1, t2) = (rng.gen_range(0.0..=1.0), rng.gen_range(0.0..=1.0));
        let (p, q) = (star(&mut rng), star(&mut rng));
        w.note(speed(&tree_space, &p, &q, t1, t2)?, i);
        let (p, q) = (tree(&mut rng), tree(&mut rng));
        w.note(speed(&product, &p, &q, t1, t2)?, i);
        let (p, q) = (plane(&mut rng), plane(&mut rng));
        w.note(speed(&Plane, &p, &q, t1, t2)?, i);
    }
    out.push(w.check("metric/geodesic-constant-speed", 1e-12, seed));

    let mut rng = rng_for(seed, 4);
    let mut lift = Worst::new();
    let mut triangle = Worst::new();
    for i in 0..samples {
        let (p, q, z) = (
            chain_point(&mut rng, &chain),
            chain_point(&mut rng, &chain),
            chain_point(&mut rng, &chain),
        );
        let d = chain.distance(&p, &q)?;
        for wraps in [-1, 1] {
            lift.note((chain.distance(&p, &chain.lift(&q, wraps))? - d).abs(), i);
        }
        triangle.note(d - chain.distance(&p, &z)? - chain.distance(&z, &q)?, i);
    }
    out.push(lift.check("metric/chain-representative", 1e-12, seed));
    out.push(triangle.check("metric/chain-triangle", 1e-12, seed));
    Ok(out)
}

/// Random member of a plane set.
fn plane_member(rng: &mut impl Rng, set: &ConvexSet<PlanePoint>) -> Result<PlanePoint> {
    Ok(match set {
        ConvexSet::AxisLine => PlanePoint::new(rng.gen_range(-10.0..10.0), 0.0),
        ConvexSet::Line { angle } => {
            let t = rng.gen_range(-10.0..10.0);
            PlanePoint::new(t * angle.cos(), t * angle.sin())
        }
        ConvexSet::Epigraph { epsilon } => {
            let u = rng.gen_range(-4.0f64..3.0).exp();
            PlanePoint::new(u, 1.0 + u.powf(-epsilon) + rng.gen_range(0.0..3.0))
        }
        ConvexSet::Segment { start, end } => {
            Plane.geodesic(start, end, rng.gen_range(0.0..=1.0))?
        }
        ConvexSet::CrossDisc { .. } => unreachable!("no discs in the plane"),
    })
}

pub fn projection_suite(seed: u64, samples: usize) -> Result<Vec<Check>> {
    let opts = ProjectionOptions {
        tol: 1e-14,
        ..Default::default()
    };
    let inputs = (samples / 10).max(10);
    let mut idem = Worst::new();
    let mut lip = Worst::new();
    let mut opt = Worst::new();
    let mut angle = Worst::new();
    let mut agree = Worst::new();

    let plane_sets = [
        ConvexSet::AxisLine,
        ConvexSet::Line { angle: 0.7 },
        ConvexSet::Epigraph { epsilon: 0.25 },
        ConvexSet::Epigraph { epsilon: 0.5 },
        ConvexSet::Epigraph { epsilon: 1.0 },
        ConvexSet::Segment {
            start: PlanePoint::new(-1.0, 0.5),
            end: PlanePoint::new(2.0, -1.0),
        },
    ];
    let mut rng = rng_for(seed, 10);
    for set in &plane_sets {
        for i in 0..inputs {
            let x = plane(&mut rng);
            let p = Plane.project(set, &x, &opts)?;
            idem.note(
                Plane.distance(&Plane.project(set, &p.point, &opts)?.point, &p.point)?,
                i,
            );
            let y = plane(&mut rng);
            let q = Plane.project(set, &y, &opts)?;
            lip.note(
                Plane.distance(&p.point, &q.point)? - Plane.distance(&x, &y)?,
                i,
            );
            for _ in 0..10 {
                let c = plane_member(&mut rng, set)?;
                let dc = Plane.distance(&x, &c)?;
                opt.note(p.distance - dc, i);
                let foot = Plane.distance(&p.point, &c)?;
                if p.distance > 1e-3 && foot > 1e-3 {
                    angle.note(FRAC_PI_2 - comparison_angle(p.distance, foot, dc)?, i);
                }
            }
        }
    }

    let sc = build_tripod_counterexample(3).map_err(|e| CliError::Failed(e.to_string()))?;
    let space = &sc.space;
    let generic = ProjectionOptions::generic(1e-12);
    let mut rng = rng_for(seed, 11);
    for set in &sc.sets {
        let ConvexSet::Segment { start, end } = set else {
            unreachable!()
        };
        for i in 0..inputs {
            let x = tree(&mut rng);
            let p = space.project(set, &x, &opts)?;
            idem.note(
                space.distance(&space.project(set, &p.point, &opts)?.point, &p.point)?,
                i,
            );
            agree.note(
                space.distance(&space.project(set, &x, &generic)?.point, &p.point)?,
                i,
            );
            let y = tree(&mut rng);
            let q = space.project(set, &y, &opts)?;
            lip.note(
                space.distance(&p.point, &q.point)? - space.distance(&x, &y)?,
                i,
            );
            for _ in 0..10 {
                let c = space.geodesic(start, end, rng.gen_range(0.0..=1.0))?;
                let dc = space.distance(&x, &c)?;
                opt.note(p.distance - dc, i);
                let foot = space.distance(&p.point, &c)?;
                if p.distance > 1e-3 && foot > 1e-3 {
                    angle.note(FRAC_PI_2 - comparison_angle(p.distance, foot, dc)?, i);
                }
            }
        }
    }

    let chain_sc =
        build_twisted_chain(1.0, 0.1, 3.0).map_err(|e| CliError::Failed(e.to_string()))?;
    let chain = &chain_sc.space;
    let mut rng = rng_for(seed, 12);
    for set in &chain_sc.sets {
        let ConvexSet::CrossDisc { disc_index } = set else {
            unreachable!()
        };
        let height = chain.disc_heights()[*disc_index];
        for i in 0..inputs {
            let x = chain_point(&mut rng, chain);
            let p = chain.project(set, &x, &opts)?;
            idem.note(
                chain.distance(&chain.project(set, &p.point, &opts)?.point, &p.point)?,
                i,
            );
            for _ in 0..10 {
                let mut c = chain_point(&mut rng, chain);
                c.height = height;
                opt.note(p.distance - chain.distance(&x, &c)?, i);
            }
        }
    }

    Ok(vec![
        idem.check("projections/idempotence", 1e-9, seed),
        lip.check("projections/nonexpansive", 1e-9, seed),
        opt.check("projections/optimality", 1e-9, seed),
        angle.check("projections/obtuse-angle", 1e-6, seed),
        agree.check("projections/exact-vs-generic", 1e-7, seed),
    ])
}

pub fn two_set_suite(seed: u64, cycles: usize) -> Result<Vec<Check>> {
    let sc = build_plane_two_sets(0.5).map_err(|e| CliError::Failed(e.to_string()))?;
    let trace = iterate(
        &sc.space,
        &sc.sets,
        &sc.default_start().point,
        cycles.max(2),
        &IterateOptions::default(),
    )
    .map_err(|e| CliError::Failed(e.to_string()))?;
    if let Some(reason) = trace.aborted {
        return Err(CliError::Numerical(reason));
    }
    let report = two_set_diagnostics(&trace).map_err(|e| CliError::Failed(e.to_string()))?;
    let at = |n: usize| Some(n);
    Ok(vec![
        Check {
            name: "two-set/step-chain".into(),
            worst: -report.step_chain_margin,
            limit: 1e-12,
            seed,
            sample: at(report.step_chain_worst_n),
        },
        Check {
            name: "two-set/gap-chain".into(),
            worst: -report.gap_chain_margin,
            limit: 1e-12,
            seed,
            sample: at(report.gap_chain_worst_n),
        },
        Check {
            name: "two-set/energy".into(),
            worst: -report.energy_margin,
            limit: 1e-12,
            seed,
            sample: at(report.energy_worst_n),
        },
        Check {
            name: "two-set/sum-of-squares".into(),
            worst: report.r_sq_sum - report.b1_sq,
            limit: 1e-9,
            seed,
            sample: None,
        },
    ])
}

pub fn counterexample_suite(seed: u64) -> Result<Vec<Check>> {
    let failed = |e: &dyn std::fmt::Display| CliError::Failed(e.to_string());
    let opts = ProjectionOptions::default();
    let mut out = Vec::new();

    let sc = build_tripod_counterexample(3).map_err(|e| failed(&e))?;
    let e = sc.start("endpoint").expect("tripod endpoint start").point;
    let trace = iterate(&sc.space, &sc.sets, &e, 100, &IterateOptions::default())
        .map_err(|e| failed(&e))?;
    let mut w = Worst::new();
    for (n, r) in trace.steps.iter().enumerate() {
        w.note((r - 1.0).abs(), n);
    }
    out.push(w.check("counterexamples/tripod-unit-steps", 1e-9, seed));

    let e1 = tripod_segment_point(0, 0, TRIPOD_HALF_WIDTH);
    let e2 = tripod_segment_point(0, 0, -TRIPOD_HALF_WIDTH);
    let apply = |x: &TreePoint| cycle_apply(&sc.space, &sc.sets, x, &opts).map(|v| v.0);
    let mut rng = rng_for(seed, 20);
    let mut w = Worst::new();
    w.note(
        sc.space
            .distance(&apply(&e1).map_err(|e| failed(&e))?, &e2)?,
        0,
    );
    for i in 0..20 {
        let t1 = rng.gen_range(0.0..=1.0);
        let t2 = rng.gen_range(0.0..=1.0);
        let x = sc.space.geodesic(&e1, &e2, t1)?;
        let y = sc.space.geodesic(&e1, &e2, t2)?;
        let (px, py) = (
            apply(&x).map_err(|e| failed(&e))?,
            apply(&y).map_err(|e| failed(&e))?,
        );
        // P reverses C_1: the image of gamma(t) is gamma(1 - t)
        w.note(
            sc.space
                .distance(&px, &sc.space.geodesic(&e1, &e2, 1.0 - t1)?)?,
            i + 1,
        );
        w.note(
            (sc.space.distance(&px, &py)? - sc.space.distance(&x, &y)?).abs(),
            i + 1,
        );
    }
    out.push(w.check("counterexamples/tripod-reversing-isometry", 1e-9, seed));

    let chain = build_twisted_chain(1.0, 0.1, 3.0).map_err(|e| failed(&e))?;
    let start = chain.start("boundary").expect("chain boundary start").point;
    let mut step = Worst::new();
    let mut regular = 0usize;
    for m in 1..=20usize {
        let cycles = if m == 1 { 10_000 } else { 200 };
        let t = iterate(
            &chain.space,
            &chain.power_sets(m),
            &start,
            cycles,
            &IterateOptions::default(),
        )
        .map_err(|e| failed(&e))?;
        let want = 0.2 * (m as f64 / 2.0).sin().abs();
        for r in &t.steps {
            step.note((r - want).abs(), m);
        }
        if verdict(&t, DEFAULT_R_TOL, DEFAULT_TAIL_FRACTION).classification
            != Classification::NotRegular
        {
            regular += 1;
        }
    }
    out.push(step.check("counterexamples/chain-rotation-steps", 1e-9, seed));
    out.push(Check {
        name: "counterexamples/chain-powers-not-regular".into(),
        worst: regular as f64,
        limit: 0.0,
        seed,
        sample: None,
    });
    Ok(out)
}

pub fn run_suite(suite: Suite, seed: u64, samples: usize, cycles: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Metric | Suite::All) {
        checks.extend(metric_suite(seed, samples)?);
    }
    if matches!(suite, Suite::Projections | Suite::All) {
        checks.extend(projection_suite(seed, samples)?);
    }
    if matches!(suite, Suite::TwoSet | Suite::All) {
        checks.extend(two_set_suite(seed, cycles)?);
    }
    if matches!(suite, Suite::Counterexamples | Suite::All) {
        checks.extend(counterexample_suite(seed)?);
    }
    Ok(checks)
}

pub fn cmd_verify(suite: Suite, seed: u64, samples: usize, cycles: usize) -> Result<()> {
    let checks = run_suite(suite, seed, samples, cycles)?;
    for c in &checks {
        println!("{}", c.line());
    }
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed()).collect();
    if failed.is_empty() {
        println!("all {} checks passed", checks.len());
        Ok(())
    } else {
        let names: Vec<String> = failed
            .iter()
            .map(|c| format!("{} (seed {})", c.name, c.seed))
            .collect();
        Err(CliError::Failed(format!(
            "failed checks: {}",
            names.join(", ")
        )))
    }
}
