//! H-cyclic monotonicity as the absence of positive cycles in the admissibility digraph.
//!
//! A closed H-sequence drawn from the graph is a directed cycle whose weight is
//! `Σ⟨v_i, ξ₁(g_{i+1}) − ξ₁(g_i)⟩`; the map is H-cyclically monotone on the graph iff
//! no cycle has positive weight. Longest paths are relaxed Bellman–Ford style on the
//! weights `w − δ`, `δ = conv_tol·(½ + |v_i|·|Δξ₁|)`, so rounding-level cycles are
//! accepted and every reported cycle is positive by more than its accumulated slack.
//! On a 2-cycle the two slacks add up to the tolerance of the pairwise monotonicity check.

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::group::{HVector, Point};
use crate::monotone::{AdmissibilityDigraph, OperatorField, OperatorGraph};
use crate::sampling::{rng_from_seed, sample_closed_hsequence, Region};
use crate::scalar::Scalar;
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CyclicCertificate {
    /// `π_j ≥ π_i + w(i→j) − δ(i→j)` on every edge.
    Potentials { values: Vec<f64> },
    /// Node indices `i₀ → i₁ → … → i_{k−1} → i₀` and the cycle weight.
    PositiveCycle {
        nodes: Vec<usize>,
        points: Vec<[f64; 3]>,
        values: Vec<[f64; 2]>,
        weight: f64,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct CyclicReport {
    pub pass: bool,
    pub nodes: usize,
    pub edges: usize,
    pub certificate: CyclicCertificate,
}

impl CyclicReport {
    pub fn cycle(&self) -> Option<&[usize]> {
        match &self.certificate {
            CyclicCertificate::PositiveCycle { nodes, .. } => Some(nodes),
            CyclicCertificate::Potentials { .. } => None,
        }
    }
}

/// Positive-cycle search on the admissibility digraph of `graph`.
pub fn hcyclic_check<S: Scalar>(graph: &OperatorGraph<S>, tol: &ToleranceConfig) -> CyclicReport {
    let digraph = AdmissibilityDigraph::build(graph, tol);
    let n = digraph.nodes;
    let conv = tol.conv::<S>();
    let half = S::lit(0.5);
    let shrunk: Vec<S> = digraph
        .edges
        .iter()
        .map(|e| e.weight - conv * (half + e.scale))
        .collect();

    // Virtual source joined to every node with weight 0.
    let mut dist = vec![S::zero(); n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut last_updated = None;
    for _ in 0..n {
        last_updated = None;
        for (e, &w) in digraph.edges.iter().zip(&shrunk) {
            let cand = dist[e.from] + w;
            if cand > dist[e.to] {
                dist[e.to] = cand;
                pred[e.to] = Some(e.from);
                last_updated = Some(e.to);
            }
        }
        if last_updated.is_none() {
            break;
        }
    }

    let report = |certificate| CyclicReport {
        pass: matches!(certificate, CyclicCertificate::Potentials { .. }),
        nodes: n,
        edges: digraph.edges.len(),
        certificate,
    };
    let Some(mut x) = last_updated else {
        return report(CyclicCertificate::Potentials {
            values: dist.iter().map(|d| d.to_f64_lossy()).collect(),
        });
    };
    // n steps back along predecessors always lands on the cycle.
    for _ in 0..n {
        x = pred[x].expect("relaxed node has a predecessor");
    }
    let mut cycle = vec![x];
    let mut y = pred[x].expect("cycle node has a predecessor");
    while y != x {
        cycle.push(y);
        y = pred[y].expect("cycle node has a predecessor");
    }
    cycle.reverse();

    let pairs = graph.pairs();
    let seq: Vec<_> = cycle.iter().map(|&i| pairs[i]).collect();
    report(CyclicCertificate::PositiveCycle {
        points: seq.iter().map(|(g, _)| g.to_array()).collect(),
        values: seq.iter().map(|(_, v)| v.to_array()).collect(),
        weight: cyclic_sum_violation(&seq).to_f64_lossy(),
        nodes: cycle,
    })
}

/// `Σ⟨ξ₁(g_{i+1}), v_i⟩ − Σ⟨ξ₁(g_i), v_i⟩` with `g_{n+1} = g_0`; positive means the
/// cyclic inequality fails on this closed sequence.
pub fn cyclic_sum_violation<S: Scalar>(seq: &[(Point<S>, HVector<S>)]) -> S {
    let n = seq.len();
    let mut next = S::zero();
    let mut here = S::zero();
    for i in 0..n {
        let (g, v) = &seq[i];
        let g_next = &seq[(i + 1) % n].0;
        next = next + g_next.xi1().dot(v);
        here = here + g.xi1().dot(v);
    }
    next - here
}

/// Outcome of [`hcyclic_check_sampled`]: one graph per sampled closed H-sequence.
#[derive(Debug, Clone, Serialize)]
pub struct SampledCyclicReport {
    pub pass: bool,
    pub sequences: usize,
    pub failures: usize,
    /// Largest `cyclic_sum_violation` over the sampled sequences themselves.
    pub max_sequence_violation: f64,
    pub first_failure: Option<CyclicReport>,
}

/// Samples `sequences` closed H-sequences with lengths uniform in `1..=max_len`,
/// evaluates `field` on each, and runs [`hcyclic_check`] on every resulting graph.
///
/// Set-valued points contribute the centre of their value.
pub fn hcyclic_check_sampled<S: Scalar>(
    field: &OperatorField<S>,
    sequences: usize,
    max_len: usize,
    region: &Region,
    tol: &ToleranceConfig,
) -> Result<SampledCyclicReport> {
    let mut rng = rng_from_seed(tol.seed);
    let mut out = SampledCyclicReport {
        pass: true,
        sequences,
        failures: 0,
        max_sequence_violation: f64::NEG_INFINITY,
        first_failure: None,
    };
    for _ in 0..sequences {
        let n = rng.gen_range(1..=max_len.max(1));
        let points: Vec<Point<S>> = sample_closed_hsequence(n, region, &mut rng, tol)?;
        let seq: Vec<_> = points.iter().map(|g| (*g, field.evaluate(g).center())).collect();
        out.max_sequence_violation = out
            .max_sequence_violation
            .max(cyclic_sum_violation(&seq).to_f64_lossy());
        let report = hcyclic_check(&OperatorGraph::new(seq)?, tol);
        if !report.pass {
            out.pass = false;
            out.failures += 1;
            if out.first_failure.is_none() {
                out.first_failure = Some(report);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_node() -> OperatorGraph<f64> {
        OperatorGraph::new(vec![
            (Point::identity(), HVector::new(0.0, 0.0)),
            (Point::new(1.0, 0.0, 0.0), HVector::new(-1.0, 0.0)),
        ])
        .unwrap()
    }

    #[test]
    fn two_node_counterexample_has_unit_positive_cycle() {
        let g = two_node();
        let r = hcyclic_check(&g, &ToleranceConfig::default());
        assert!(!r.pass);
        let CyclicCertificate::PositiveCycle { nodes, weight, .. } = &r.certificate else {
            panic!("expected a cycle");
        };
        assert_eq!(nodes.len(), 2);
        assert_eq!(*weight, 1.0);
        let seq: Vec<_> = nodes.iter().map(|&i| g.pairs()[i]).collect();
        assert_eq!(cyclic_sum_violation(&seq), 1.0);
    }

    #[test]
    fn one_node_graph_passes() {
        let g = OperatorGraph::new(vec![(Point::new(1.0, 1.0, 1.0), HVector::new(5.0, -5.0))]).unwrap();
        let r = hcyclic_check(&g, &ToleranceConfig::default());
        assert!(r.pass);
        assert_eq!(r.edges, 0);
    }

    #[test]
    fn potentials_certify_monotone_pair() {
        let g = OperatorGraph::new(vec![
            (Point::identity(), HVector::new(0.0, 0.0)),
            (Point::new(1.0, 0.0, 0.0), HVector::new(1.0, 0.0)),
        ])
        .unwrap();
        let tol = ToleranceConfig::default();
        let r = hcyclic_check(&g, &tol);
        let CyclicCertificate::Potentials { values } = &r.certificate else {
            panic!("expected potentials");
        };
        for e in AdmissibilityDigraph::build(&g, &tol).edges {
            assert!(values[e.to] >= values[e.from] + e.weight - 1e-10 * (0.5 + e.scale));
        }
    }

    #[test]
    fn cycle_is_found_behind_a_tail() {
        // Node 2 feeds into the violating pair but is not on the cycle.
        let g = OperatorGraph::new(vec![
            (Point::new(-1.0, 0.0, 0.0), HVector::new(-7.0, 0.0)),
            (Point::identity(), HVector::new(0.0, 0.0)),
            (Point::new(1.0, 0.0, 0.0), HVector::new(-1.0, 0.0)),
        ])
        .unwrap();
        let r = hcyclic_check(&g, &ToleranceConfig::default());
        let CyclicCertificate::PositiveCycle { nodes, weight, .. } = &r.certificate else {
            panic!("expected a cycle");
        };
        let mut sorted = nodes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2]);
        assert_eq!(*weight, 1.0);
        let seq: Vec<_> = nodes.iter().map(|&i| g.pairs()[i]).collect();
        assert_eq!(cyclic_sum_violation(&seq), *weight);
    }

    #[test]
    fn cyclic_sum_matches_definition_on_a_triangle() {
        let seq = [
            (Point::new(0.0, 0.0, 0.0), HVector::new(1.0, 2.0)),
            (Point::new(1.0, 0.0, 0.0), HVector::new(0.0, 1.0)),
            (Point::new(1.0, 1.0, -2.0), HVector::new(-1.0, 0.0)),
        ];
        // next: ⟨(1,0),(1,2)⟩ + ⟨(1,1),(0,1)⟩ + ⟨(0,0),(-1,0)⟩ = 1 + 1 + 0
        // here: 0 + 0 + (−1)
        assert_eq!(cyclic_sum_violation(&seq), 3.0);
    }
}
