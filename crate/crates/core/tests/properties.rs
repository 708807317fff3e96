use hadamard_proj::convex::{ConvexSet, ProjectionOptions, ProjectionSpace};
use hadamard_proj::engine::{iterate, two_set_diagnostics, IterateOptions};
use hadamard_proj::metric::{
    cn_check, ChainPoint, GeodesicSpace, MetricSpace, Plane, PlanePoint, ProductPoint, StarPoint,
    StarTree, TripodProduct, TwistedChain,
};
use hadamard_proj::scenarios::build_tripod_counterexample;
use proptest::prelude::*;

fn star() -> impl Strategy<Value = StarPoint> {
    (0usize..3, 0.0f64..=1.0).prop_map(|(leg, t)| StarPoint::new(leg, t))
}

fn tree() -> impl Strategy<Value = ProductPoint<StarPoint, StarPoint>> {
    (star(), star()).prop_map(|(l, r)| ProductPoint::new(l, r))
}

fn plane() -> impl Strategy<Value = PlanePoint> {
    (-20.0f64..20.0, -20.0f64..20.0).prop_map(|(x, y)| PlanePoint::new(x, y))
}

fn chain_point() -> impl Strategy<Value = ChainPoint> {
    (0.0f64..0.1, 0.0f64..std::f64::consts::TAU, -10.0f64..10.0)
        .prop_map(|(rho, phi, h)| ChainPoint::new(rho * phi.cos(), rho * phi.sin(), h))
}

fn plane_set() -> impl Strategy<Value = ConvexSet<PlanePoint>> {
    prop_oneof![
        Just(ConvexSet::AxisLine),
        (0.0f64..3.0).prop_map(|angle| ConvexSet::Line { angle }),
        (0.05f64..=1.0).prop_map(|epsilon| ConvexSet::Epigraph { epsilon }),
        (plane(), plane()).prop_map(|(start, end)| ConvexSet::Segment { start, end }),
    ]
}

fn metric_axioms<S: MetricSpace>(space: &S, x: &S::Point, y: &S::Point, z: &S::Point) {
    let dxy = space.distance(x, y).unwrap();
    assert!(dxy >= 0.0);
    assert!(space.distance(x, x).unwrap() <= 1e-12);
    assert!((dxy - space.distance(y, x).unwrap()).abs() <= 1e-12);
    let dxz = space.distance(x, z).unwrap();
    let dzy = space.distance(z, y).unwrap();
    assert!(dxy <= dxz + dzy + 1e-12);
}

proptest! {
    #[test]
    fn star_tree_is_a_metric(x in star(), y in star(), z in star()) {
        metric_axioms(&StarTree::tripod(), &x, &y, &z);
    }

    #[test]
    fn tripod_product_is_a_metric(x in tree(), y in tree(), z in tree()) {
        metric_axioms(&TripodProduct::unit_tripods(), &x, &y, &z);
    }

    #[test]
    fn twisted_chain_is_a_metric(x in chain_point(), y in chain_point(), z in chain_point()) {
        let chain = TwistedChain::new(0.1, 3.0, 1.0).unwrap();
        metric_axioms(&chain, &x, &y, &z);
    }

    #[test]
    fn tripod_product_satisfies_cn(x in tree(), y in tree(), z in tree()) {
        let space = TripodProduct::unit_tripods();
        prop_assert!(cn_check(&space, &x, &y, &z).unwrap() >= -1e-12);
    }

    #[test]
    fn midpoint_halves_the_distance(x in tree(), y in tree()) {
        let space = TripodProduct::unit_tripods();
        let m = space.midpoint(&x, &y).unwrap();
        let d = space.distance(&x, &y).unwrap();
        prop_assert!((space.distance(&x, &m).unwrap() - d / 2.0).abs() <= 1e-12);
        prop_assert!((space.distance(&m, &y).unwrap() - d / 2.0).abs() <= 1e-12);
    }

    #[test]
    fn plane_projections_are_nonexpansive(set in plane_set(), x in plane(), y in plane()) {
        let opts = ProjectionOptions { tol: 1e-14, ..Default::default() };
        let px = Plane.project(&set, &x, &opts).unwrap();
        let py = Plane.project(&set, &y, &opts).unwrap();
        prop_assert!(Plane.distance(&px.point, &py.point).unwrap() <= Plane.distance(&x, &y).unwrap() + 1e-9);
        prop_assert!((px.distance - Plane.distance(&x, &px.point).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn tree_projections_are_idempotent_and_nonexpansive(i in 0usize..3, x in tree(), y in tree()) {
        let sc = build_tripod_counterexample(3).unwrap();
        let opts = ProjectionOptions::default();
        let px = sc.space.project(&sc.sets[i], &x, &opts).unwrap().point;
        let py = sc.space.project(&sc.sets[i], &y, &opts).unwrap().point;
        let ppx = sc.space.project(&sc.sets[i], &px, &opts).unwrap().point;
        prop_assert!(sc.space.distance(&ppx, &px).unwrap() <= 1e-12);
        prop_assert!(sc.space.distance(&px, &py).unwrap() <= sc.space.distance(&x, &y).unwrap() + 1e-12);
    }

    #[test]
    fn two_set_chains_hold_from_random_starts(x in plane(), epsilon in 0.1f64..=1.0) {
        let sets = vec![ConvexSet::AxisLine, ConvexSet::Epigraph { epsilon }];
        let trace = iterate(&Plane, &sets, &x, 50, &IterateOptions::default()).unwrap();
        let report = two_set_diagnostics(&trace).unwrap();
        prop_assert!(report.chains_hold(), "{:?}", report);
        prop_assert!(report.energy_holds(), "{:?}", report);
        prop_assert!(report.sum_holds(), "{:?}", report);
    }
}
