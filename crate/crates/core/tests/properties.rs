use heisconvex_core::group::{dilate, exp_h};
use heisconvex_core::hconvex::{
    build_affine_pairing, build_gauge, build_quadratic, horizontal_gradient, QuadraticSpec,
};
use heisconvex_core::monotone::{
    apply, cyclic_sum_violation, hcyclic_check, hmonotone_check_graph, linear_monotone_criterion, quadratic_potential,
    OperatorField, OperatorGraph,
};
use heisconvex_core::sampling::{rng_from_seed, sample_closed_hsequence, Region};
use heisconvex_core::{on_horizontal_plane, HVector, Point, ScalarField, ToleranceConfig};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn point() -> impl Strategy<Value = Point<f64>> {
    (coord(), coord(), coord()).prop_map(|(x, y, t)| Point::new(x, y, t))
}

fn hvec() -> impl Strategy<Value = HVector<f64>> {
    (coord(), coord()).prop_map(|(a, b)| HVector::new(a, b))
}

fn matrix() -> impl Strategy<Value = [[f64; 2]; 2]> {
    prop::array::uniform2(prop::array::uniform2(-5.0..5.0f64))
}

fn close(a: &Point<f64>, b: &Point<f64>, rel: f64) -> bool {
    let scale = 1.0 + a.max_abs().max(b.max_abs());
    (a.x - b.x).abs() <= rel * scale && (a.y - b.y).abs() <= rel * scale && (a.t - b.t).abs() <= rel * scale * scale
}

proptest! {
    #[test]
    fn associativity(a in point(), b in point(), c in point()) {
        prop_assert!(close(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c)), 1e-12));
    }

    #[test]
    fn dilation_is_a_homomorphism(a in point(), b in point(), l in 0.01..5.0f64) {
        prop_assert!(close(&dilate(l, &a.mul(&b)), &dilate(l, &a).mul(&dilate(l, &b)), 1e-12));
    }

    #[test]
    fn plane_relation_is_symmetric(g in point(), w in hvec(), s in -1e-6..1e-6f64) {
        let h = g.step(&w);
        let h = Point::new(h.x, h.y, h.t + s);
        let tol = ToleranceConfig::default();
        prop_assert_eq!(on_horizontal_plane(&g, &h, &tol), on_horizontal_plane(&h, &g, &tol));
    }

    #[test]
    fn planes_are_left_invariant(g0 in point(), a in point(), w in hvec()) {
        let g = g0.step(&w);
        let tol = ToleranceConfig::default();
        prop_assert!(on_horizontal_plane(&a.mul(&g0), &a.mul(&g), &tol));
    }

    #[test]
    fn exp_of_sum_along_a_line(w in hvec(), s in -3.0..3.0f64, r in -3.0..3.0f64) {
        let lhs = exp_h(&w.scale(s)).mul(&exp_h(&w.scale(r)));
        prop_assert!(close(&lhs, &exp_h(&w.scale(s + r)), 1e-12));
    }

    #[test]
    fn potential_gradient_reproduces_q(q in matrix(), g in point()) {
        let spec = quadratic_potential(&q).spec();
        let grad = spec.hgrad(&g);
        let want = apply(&q, &g.xi1());
        prop_assert!((grad - want).norm() <= 1e-12 * (1.0 + want.norm()));
    }

    #[test]
    fn potential_convexity_matches_criterion(q in matrix()) {
        let p = quadratic_potential(&q);
        prop_assert_eq!(p.is_convex(), linear_monotone_criterion(&q).euclidean_monotone);
    }

    #[test]
    fn two_pair_graphs_agree_on_both_checks(g in point(), w in hvec(), v in hvec(), v2 in hvec()) {
        let tol = ToleranceConfig::default();
        let graph = OperatorGraph::new(vec![(g, v), (g.step(&w), v2)]).unwrap();
        prop_assume!(graph.len() == 2);
        let m = hmonotone_check_graph(&graph, &tol);
        let c = hcyclic_check(&graph, &tol);
        prop_assert_eq!(m.pass, c.pass);
    }
}

fn builtin_fields() -> Vec<ScalarField<f64>> {
    vec![
        build_gauge(),
        build_quadratic(QuadraticSpec::new([[3.0, 0.0], [0.0, 4.0]], 1.0).unwrap()),
        build_quadratic(QuadraticSpec::new([[3.0, -1.0], [-1.0, 4.0]], 0.5).unwrap()),
        build_quadratic(QuadraticSpec::new([[1.0, 0.0], [0.0, 1.0]], 0.0).unwrap()),
        build_affine_pairing(HVector::new(1.0, -2.0)),
    ]
}

#[test]
fn subdifferential_graphs_satisfy_the_cyclic_inequality() {
    let tol = ToleranceConfig::default();
    let mut rng = rng_from_seed(2024);
    for f in builtin_fields() {
        for k in 0..100 {
            let n = 1 + k % 6;
            let seq: Vec<Point<f64>> = sample_closed_hsequence(n, &Region::default(), &mut rng, &tol).unwrap();
            let pairs: Vec<_> = seq
                .iter()
                .map(|g| (*g, horizontal_gradient(&f, g, &tol).unwrap_or_else(|_| HVector::zero())))
                .collect();
            let viol = cyclic_sum_violation(&pairs);
            assert!(viol <= 1e-9, "{}: {viol}", f.label());
        }
    }
}

#[test]
fn euclidean_cyclic_lifts_are_h_cyclic() {
    let tol = ToleranceConfig::default();
    let mut rng = rng_from_seed(77);
    for q in [
        [[2.0, 1.0], [1.0, 3.0]],
        [[1.0, 0.0], [0.0, 0.0]],
        [[0.0, 0.0], [0.0, 0.0]],
    ] {
        assert!(linear_monotone_criterion(&q).euclidean_cyclic);
        let t = OperatorField::linear(q);
        for k in 0..50 {
            let seq: Vec<Point<f64>> = sample_closed_hsequence(1 + k % 6, &Region::default(), &mut rng, &tol).unwrap();
            let graph = OperatorGraph::new(seq.iter().map(|g| (*g, t.evaluate_single(g).unwrap()))).unwrap();
            assert!(hcyclic_check(&graph, &tol).pass);
        }
    }
}

#[test]
fn cycle_certificates_reproduce_a_positive_sum() {
    let tol = ToleranceConfig::default();
    let mut rng = rng_from_seed(5);
    // Indefinite symmetric part: plane-related pairs along y already violate monotonicity.
    let t = OperatorField::linear([[1.0, 0.0], [0.0, -1.0]]);
    let mut found = 0;
    for k in 0..200 {
        let seq: Vec<Point<f64>> = sample_closed_hsequence(2 + k % 5, &Region::default(), &mut rng, &tol).unwrap();
        let graph = OperatorGraph::new(seq.iter().map(|g| (*g, t.evaluate_single(g).unwrap()))).unwrap();
        let r = hcyclic_check(&graph, &tol);
        if let Some(cycle) = r.cycle() {
            found += 1;
            let closed: Vec<_> = cycle.iter().map(|&i| graph.pairs()[i]).collect();
            for w in closed.windows(2) {
                assert!(on_horizontal_plane(&w[0].0, &w[1].0, &tol));
            }
            assert!(on_horizontal_plane(&closed[0].0, &closed.last().unwrap().0, &tol));
            assert!(cyclic_sum_violation(&closed) > 0.0);
        }
    }
    assert!(found > 0);
}
