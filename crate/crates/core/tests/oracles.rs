//! Solver outputs against independent computations: exhaustive chain enumeration for
//! the Rockafellar DP, and the 2×2 linear solve for the resolvent of `Q·ξ₁`.

mod common;

use common::{brute_force, closed_form, example_quadratic_graph, random_psd_operator};
use heisconvex_core::hconvex::{build_gauge, build_quadratic, subgradient_membership, QuadraticSpec};
use heisconvex_core::monotone::{left_translate_operator, OperatorField};
use heisconvex_core::plane::plane_residual;
use heisconvex_core::sampling::rng_from_seed;
use heisconvex_core::solvers::{
    minty_resolve, resolvent_residual, rockafellar_eval, ChainQuery, ResolveStatus, ResolventQuery, RockafellarOutcome,
    RockafellarTable,
};
use heisconvex_core::{on_horizontal_plane, HVector, Point, ToleranceConfig};
use rand::Rng;

#[test]
fn dp_equals_exhaustive_enumeration() {
    let tol = ToleranceConfig::default();
    let mut rng = rng_from_seed(31);
    for seed in 0..20u64 {
        let graph = example_quadratic_graph(seed, 3 + (seed as usize % 6));
        let base = graph.pairs()[0].0;
        let mut targets: Vec<Point<f64>> = graph.pairs().iter().map(|p| p.0).collect();
        for (g, _) in graph.pairs() {
            targets.push(g.step(&HVector::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))));
        }
        targets.push(Point::new(9.0, 9.0, 9.0));
        for max_hops in 1..=4 {
            for target in &targets {
                let mut q = ChainQuery::new(graph.clone(), base, 0.0, *target);
                q.max_hops = max_hops;
                let dp = rockafellar_eval(&q, &tol).unwrap();
                let bf = brute_force(&graph, &base, target, max_hops, &tol);
                match (dp, bf) {
                    (RockafellarOutcome::Value { value, .. }, Some(b)) => {
                        assert_eq!(value, b, "seed {seed}, hops {max_hops}")
                    }
                    (RockafellarOutcome::Unreachable, None) => {}
                    (d, b) => panic!("seed {seed}, hops {max_hops}: dp {d:?} vs brute force {b:?}"),
                }
            }
        }
    }
}

#[test]
fn reconstructed_potential_contains_the_graph() {
    let tol = ToleranceConfig::default();
    for seed in 0..10u64 {
        let graph = example_quadratic_graph(100 + seed, 8);
        let base = graph.pairs()[0].0;
        let table = RockafellarTable::build(&graph, &base, 0.0, graph.len(), &tol).unwrap();
        let u = table.into_field(false, &tol);
        for (g, v) in graph.pairs() {
            let r = subgradient_membership(&u, g, v, 100, 2.0, &tol);
            assert!(r.min_slack >= -1e-8, "seed {seed}: {:?}", r.witnesses.first());
        }
    }
}

#[test]
fn linear_resolvent_matches_closed_form() {
    let tol = ToleranceConfig::default();
    let mut rng = rng_from_seed(8);
    for _ in 0..100 {
        let q = random_psd_operator(&mut rng);
        let lambda = rng.gen_range(1e-3..=5.0);
        let g0 = Point::new(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        let v = HVector::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let s = minty_resolve(
            &ResolventQuery {
                operator: OperatorField::linear(q),
                base: g0,
                lambda,
                target: v,
            },
            &tol,
        )
        .unwrap();
        let want = closed_form(&q, lambda, &v);
        assert_eq!(s.status, ResolveStatus::Converged);
        assert!((s.g.xi1() - want).norm() <= 1e-8, "{q:?} {lambda} {v:?}");
        assert!(plane_residual(&g0, &s.g).abs() <= 1e-9);
    }
}

#[test]
fn resolvent_residuals_are_reverified() {
    let tol = ToleranceConfig::default();
    let op = OperatorField::hgrad_of(&build_gauge::<f64>(), &tol);
    let mut rng = rng_from_seed(12);
    for _ in 0..40 {
        let g0 = Point::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        let v = HVector::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let lambda = rng.gen_range(0.1..3.0);
        let s = minty_resolve(
            &ResolventQuery {
                operator: op.clone(),
                base: g0,
                lambda,
                target: v,
            },
            &tol,
        )
        .unwrap();
        assert!(s.status.is_success());
        let recomputed = resolvent_residual(&op, &s.g, lambda, &v);
        assert!(recomputed <= 1e-10 * (1.0 + v.norm()));
        assert!(on_horizontal_plane(&g0, &s.g, &tol));
    }
}

#[test]
fn translation_covariance() {
    let tol = ToleranceConfig::default();
    let mut rng = rng_from_seed(50);
    let quad = build_quadratic(QuadraticSpec::new([[3.0, -1.0], [-1.0, 4.0]], 0.5).unwrap());
    let fields = [
        OperatorField::hgrad_of(&quad, &tol),
        OperatorField::hgrad_of(&build_gauge::<f64>(), &tol),
    ];
    for k in 0..50 {
        let op = &fields[k % 2];
        let g0 = Point::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        let v = HVector::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let lambda = rng.gen_range(0.2..3.0);
        let direct = minty_resolve(
            &ResolventQuery {
                operator: op.clone(),
                base: g0,
                lambda,
                target: v,
            },
            &tol,
        )
        .unwrap();
        let t0 = left_translate_operator(op, &g0);
        let moved = minty_resolve(
            &ResolventQuery {
                operator: t0.clone(),
                base: Point::identity(),
                lambda,
                target: v - g0.xi1(),
            },
            &tol,
        )
        .unwrap();
        assert!(direct.status.is_success() && moved.status.is_success());
        // The direct solution maps to a solution of the translated problem and back.
        let pulled = g0.inverse().mul(&direct.g);
        assert!(resolvent_residual(&t0, &pulled, lambda, &(v - g0.xi1())) <= 1e-8);
        let pushed = g0.mul(&moved.g);
        assert!(resolvent_residual(op, &pushed, lambda, &v) <= 1e-8);
        if k % 2 == 0 {
            // Unique solution for the strongly monotone quadratic.
            assert!((pushed.xi1() - direct.g.xi1()).norm() <= 1e-8);
        }
    }
}
