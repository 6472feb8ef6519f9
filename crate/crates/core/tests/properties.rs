use std::sync::OnceLock;

use proptest::prelude::*;
use qhmetric::constants::{eta_prime, theta0_relative, FunctionTable};
use qhmetric::estimators::{estimate_weak_qs, triple_ratio, SampleSpec};
use qhmetric::maps::compose;
use qhmetric::qhgraph::{build_mesh, qh_weight, QhMesh};
use qhmetric::sampling::Window;
use qhmetric::scenarios::Builtin;
use qhmetric::{pt, MapSpec, PlaneDomain, Point, Region};

fn halfplane_mesh() -> &'static QhMesh {
    static MESH: OnceLock<QhMesh> = OnceLock::new();
    MESH.get_or_init(|| {
        let b = Builtin::HalfPlane;
        build_mesh(&b.region(), &b.mesh_params(0.1)).unwrap()
    })
}

fn window_point() -> impl Strategy<Value = Point> {
    (-1.0..1.0f64, 0.3..2.0f64).prop_map(|(x, y)| pt(x, y))
}

fn annulus_point() -> impl Strategy<Value = Point> {
    (0.2..5.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Point::from_polar(r, t))
}

fn plane_regions() -> Vec<Region> {
    Builtin::ALL
        .into_iter()
        .map(|b| b.region())
        .filter(|r| r.as_plane().is_some())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn boundary_distance_is_one_lipschitz(
        p in (-3.0..3.0f64, -3.0..3.0f64),
        q in (-3.0..3.0f64, -3.0..3.0f64),
    ) {
        let (p, q) = (pt(p.0, p.1), pt(q.0, q.1));
        for g in plane_regions() {
            let gap = (g.distance_to_boundary(p) - g.distance_to_boundary(q)).abs();
            prop_assert!(gap <= (p - q).norm() + 1e-12);
        }
    }

    #[test]
    fn maps_round_trip(x in window_point(), z in annulus_point()) {
        let stretch = MapSpec::affine([2.0, 0.5, 0.0, 1.0], pt(1.0, 0.0), PlaneDomain::upper_half_plane()).unwrap();
        let both = compose(&MapSpec::HalfPlaneShear, &stretch).unwrap();
        for f in [&stretch, &MapSpec::HalfPlaneShear, &both] {
            let back = f.invert(f.eval(x).unwrap()).unwrap();
            prop_assert!((back - x).norm() <= 1e-12, "{} at {x}", f.name());
        }
        let back = MapSpec::Inversion.invert(MapSpec::Inversion.eval(z).unwrap()).unwrap();
        prop_assert!((back - z).norm() <= 1e-12);
    }

    #[test]
    fn mesh_distance_is_symmetric(x in window_point(), y in window_point()) {
        let m = halfplane_mesh();
        let a = m.distance(x, y).unwrap().distance;
        let b = m.distance(y, x).unwrap().distance;
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn triangle_inequality_at_nodes(i in 0usize..100_000, j in 0usize..100_000, k in 0usize..100_000) {
        let m = halfplane_mesh();
        let n = m.node_count();
        let (a, b, c) = (m.nodes()[i % n], m.nodes()[j % n], m.nodes()[k % n]);
        let ac = m.distance(a, c).unwrap().distance;
        let ab = m.distance(a, b).unwrap().distance;
        let bc = m.distance(b, c).unwrap().distance;
        prop_assert!(ac <= ab + bc + 1e-9 * (ab + bc));
    }

    #[test]
    fn larger_domains_give_lighter_edges(p in (-0.5..0.5f64, -0.5..0.5f64), q in (-0.5..0.5f64, -0.5..0.5f64)) {
        let small: Region = PlaneDomain::disk(pt(0.0, 0.0), 1.0).unwrap().into();
        let big: Region = PlaneDomain::disk(pt(0.0, 0.0), 2.0).unwrap().into();
        let (p, q) = (pt(p.0, p.1), pt(q.0, q.1));
        prop_assert!(qh_weight(&big, p, q).unwrap() <= qh_weight(&small, p, q).unwrap());
    }

    #[test]
    fn control_functions_are_monotone(s in 0.0..0.99f64, ds in 0.0..0.5f64, c in 1.0..6.0f64) {
        let t = (s + ds).min(0.999);
        prop_assert!(theta0_relative(s, c).unwrap() <= theta0_relative(t, c).unwrap());
        let theta = |u: f64| 2.0 * u;
        let (a, b) = (eta_prime(4.0 * s, c, 2.0, theta).unwrap(), eta_prime(4.0 * t, c, 2.0, theta).unwrap());
        prop_assert!(a <= b * (1.0 + 1e-12));
    }

    #[test]
    fn tables_compose_monotonically(slopes in proptest::collection::vec(0.0..3.0f64, 1..20)) {
        let mut t = vec![0.0];
        let mut v = vec![0.0];
        for (i, s) in slopes.iter().enumerate() {
            t.push((i + 1) as f64 * 0.25);
            v.push(v[i] + s * 0.25);
        }
        let phi = FunctionTable::new(t, v).unwrap();
        let both = qhmetric::constants::compose_semisolid(&phi, &phi).unwrap();
        prop_assert!(both.is_monotone());
    }

    #[test]
    fn local_triples_never_beat_global_ones(seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let f = MapSpec::HalfPlaneShear;
        let g = f.source_region();
        let q = 0.5;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut global = 0.0_f64;
        let mut local = 0.0_f64;
        for _ in 0..200 {
            let x = pt(rng.random_range(-1.0..1.0), rng.random_range(0.3..2.0));
            let rho = q * g.boundary_distance(x).unwrap();
            let mut near = || x + Point::from_polar(rho * rng.random::<f64>(), rng.random_range(0.0..std::f64::consts::TAU));
            let (a, b) = (near(), near());
            let (a, b) = if (x - a).norm() <= (x - b).norm() { (a, b) } else { (b, a) };
            if b == x {
                continue;
            }
            let r = triple_ratio(&f, x, a, b).unwrap();
            global = global.max(r);
            if (a - x).norm() < rho && (b - x).norm() < rho {
                local = local.max(r);
            }
        }
        prop_assert!(local <= global);
    }

    #[test]
    fn estimates_grow_with_sample_count(seed in 0u64..50, n in 1usize..30, extra in 0usize..30) {
        let w = Window::Annulus { center: pt(0.0, 0.0), inner: 0.5, outer: 2.0 };
        let mut spec = SampleSpec::new(seed, n).with_window(w);
        spec.witness_t.clear();
        let small = estimate_weak_qs(&MapSpec::Inversion, &spec).unwrap().estimate;
        spec.count = n + extra;
        let large = estimate_weak_qs(&MapSpec::Inversion, &spec).unwrap().estimate;
        prop_assert!(small <= large);
    }
}
