use qhmetric::qhgraph::{
    build_length_mesh, build_mesh, comparison_check, length_comparison_check, PairSpec,
};
use qhmetric::scenarios::Builtin;

const EPS: f64 = 0.05;

fn spec(b: Builtin, seed: u64) -> PairSpec {
    PairSpec {
        seed,
        count: 200,
        window: b.window(),
    }
}

#[test]
fn comparison_bounds_hold_on_builtin_domains() {
    for b in Builtin::ALL {
        let mesh = build_mesh(&b.region(), &b.mesh_params(0.1)).unwrap();
        let rep = comparison_check(&mesh, &spec(b, 34), EPS).unwrap();
        let bad = rep.violations();
        assert!(bad.is_empty(), "{}: {:?}", b.name(), bad.first());
        assert!(rep.rows.iter().any(|r| r.id.ends_with(":2")));
        assert!(rep.rows.iter().any(|r| r.id.ends_with(":3")));
    }
}

#[test]
fn length_metric_bounds_hold_on_builtin_domains() {
    for b in Builtin::ALL {
        let region = b.region();
        let params = b.mesh_params(0.1);
        let k = build_mesh(&region, &params).unwrap();
        let kp = build_length_mesh(&region, &params).unwrap();
        let rep = length_comparison_check(&k, &kp, &spec(b, 36), EPS).unwrap();
        let bad = rep.violations();
        assert!(bad.is_empty(), "{}: {:?}", b.name(), bad.first());
    }
}
