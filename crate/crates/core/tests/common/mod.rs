//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use heisconvex_core::monotone::{OperatorField, OperatorGraph};
use heisconvex_core::sampling::{rng_from_seed, sample_closed_hsequence, Region};
use heisconvex_core::{on_horizontal_plane, HVector, Point, ToleranceConfig};
use rand::Rng;

/// Best chain sum by enumerating every node sequence with at most `max_hops` hops.
pub fn brute_force(
    graph: &OperatorGraph<f64>,
    base: &Point<f64>,
    target: &Point<f64>,
    max_hops: usize,
    tol: &ToleranceConfig,
) -> Option<f64> {
    let pairs = graph.pairs();
    let mut best: Option<f64> = (target == base).then_some(0.0);
    fn walk(
        pairs: &[(Point<f64>, HVector<f64>)],
        path: &mut Vec<usize>,
        acc: f64,
        target: &Point<f64>,
        max_hops: usize,
        tol: &ToleranceConfig,
        best: &mut Option<f64>,
    ) {
        let last = *path.last().unwrap();
        let (g, v) = &pairs[last];
        if on_horizontal_plane(g, target, tol) {
            let total = acc + v.dot(&(target.xi1() - g.xi1()));
            if best.is_none_or(|b| total > b) {
                *best = Some(total);
            }
        }
        if path.len() == max_hops {
            return;
        }
        for next in 0..pairs.len() {
            if next == last || !on_horizontal_plane(g, &pairs[next].0, tol) {
                continue;
            }
            let step = v.dot(&(pairs[next].0.xi1() - g.xi1()));
            path.push(next);
            walk(pairs, path, acc + step, target, max_hops, tol, best);
            path.pop();
        }
    }
    for start in graph.nodes_at(base) {
        walk(pairs, &mut vec![start], 0.0, target, max_hops, tol, &mut best);
    }
    best
}

/// Graph of `T = Q₁·ξ₁` on a sampled closed H-sequence with `nodes` points.
pub fn example_quadratic_graph(seed: u64, nodes: usize) -> OperatorGraph<f64> {
    let tol = ToleranceConfig::default();
    let t = OperatorField::linear([[3.0, 2.0], [-2.0, 4.0]]);
    let mut rng = rng_from_seed(seed);
    let seq: Vec<Point<f64>> = sample_closed_hsequence(nodes - 1, &Region::default(), &mut rng, &tol).unwrap();
    OperatorGraph::new(seq.iter().map(|g| (*g, t.evaluate_single(g).unwrap()))).unwrap()
}

/// `BᵀB + k·J`: positive semidefinite symmetric part, arbitrary skew part.
pub fn random_psd_operator<R: Rng>(rng: &mut R) -> [[f64; 2]; 2] {
    let b = [
        [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
        [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
    ];
    let s00 = b[0][0] * b[0][0] + b[1][0] * b[1][0];
    let s01 = b[0][0] * b[0][1] + b[1][0] * b[1][1];
    let s11 = b[0][1] * b[0][1] + b[1][1] * b[1][1];
    let k = rng.gen_range(-3.0..3.0);
    [[s00, s01 + k], [s01 - k, s11]]
}

/// `(I + λQ)⁻¹v` by Cramer's rule.
pub fn closed_form(q: &[[f64; 2]; 2], lambda: f64, v: &HVector<f64>) -> HVector<f64> {
    let a = [
        [1.0 + lambda * q[0][0], lambda * q[0][1]],
        [lambda * q[1][0], 1.0 + lambda * q[1][1]],
    ];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    HVector::new(
        (a[1][1] * v.w1 - a[0][1] * v.w2) / det,
        (-a[1][0] * v.w1 + a[0][0] * v.w2) / det,
    )
}
